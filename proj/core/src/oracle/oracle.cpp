#include "dropsim/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace dropsim::oracle {
namespace {

template <typename T>
T sorted_rank(std::vector<T> v, std::size_t rank) {
  if (v.empty()) throw std::domain_error("median of empty vector");
  if (rank < 1 || rank > v.size()) throw std::out_of_range("rank outside 1..len");
  std::sort(v.begin(), v.end());
  return v[rank - 1];
}

template <typename T>
T nth_rank(std::vector<T> v, std::size_t rank) {
  if (v.empty()) throw std::domain_error("selection on empty vector");
  if (rank < 1 || rank > v.size()) throw std::out_of_range("rank outside 1..len");
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
  return v[rank - 1];
}

}  // namespace

double sort_median(std::vector<double> v) {
  const std::size_t rank = (v.size() + 1) / 2;
  return sorted_rank(std::move(v), rank);
}

std::int64_t sort_median(std::vector<std::int64_t> v) {
  const std::size_t rank = (v.size() + 1) / 2;
  return sorted_rank(std::move(v), rank);
}

double select_rank(std::vector<double> v, std::size_t rank) { return nth_rank(std::move(v), rank); }
std::int64_t select_rank(std::vector<std::int64_t> v, std::size_t rank) { return nth_rank(std::move(v), rank); }

double row_max(const std::vector<double>& row) {
  if (row.empty()) throw std::domain_error("max of empty row");
  double best = row[0];
  for (double x : row) best = x > best ? x : best;
  return best;
}

std::vector<double> mcn_row(const std::vector<double>& row, double max, unsigned exponent) {
  double denom = 1.0;
  for (unsigned k = 0; k < exponent; ++k) denom *= max;
  std::vector<double> out;
  out.reserve(row.size());
  for (double x : row) out.push_back((x - max) / denom);
  return out;
}

std::vector<double> mcn_aggregate(const std::vector<double>& a, std::size_t heads, std::size_t m, double offset,
                                  unsigned exponent) {
  std::vector<double> scores(m, 0.0);
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(m);
      for (std::size_t j = 0; j < m; ++j) row[j] = a[(h * m + i) * m + j] + offset;
      const std::vector<double> v = mcn_row(row, row_max(row), exponent);
      for (std::size_t j = 0; j < m; ++j) scores[j] += v[j];
    }
  }
  return scores;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// x / 2^f rounded to nearest, halves up.
std::int64_t rescale(std::int64_t x, unsigned f) { return floor_div(x + (std::int64_t{1} << (f - 1)), std::int64_t{1} << f); }

}  // namespace

std::vector<std::int64_t> mcn_aggregate_fixed(const std::vector<std::int64_t>& a, std::size_t heads, std::size_t m,
                                              unsigned frac_bits, std::int64_t offset, unsigned exponent) {
  if (a.size() != heads * m * m) throw std::invalid_argument("mcn_aggregate_fixed: size mismatch");
  std::vector<std::int64_t> scores(m, 0);
  const std::int64_t one_sq = std::int64_t{1} << (2 * frac_bits);
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::int64_t* row = &a[(h * m + i) * m];
      const std::int64_t mx = *std::max_element(row, row + m) + offset;
      if (mx <= 0) throw std::domain_error("mcn_aggregate_fixed: non-positive row maximum");
      const std::int64_t recip = floor_div(2 * one_sq + mx, 2 * mx);  // round(2^2f / mx)
      for (std::size_t j = 0; j < m; ++j) {
        std::int64_t v = row[j] + offset - mx;
        for (unsigned k = 0; k < exponent; ++k) v = rescale(v * recip, frac_bits);
        scores[j] += v;
      }
    }
  }
  return scores;
}

std::vector<double> we_ph1_scores(const std::vector<double>& a, std::size_t heads, std::size_t m) {
  std::vector<double> scores(m, 0.0);
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = &a[(h * m + i) * m];
      const double mx = *std::max_element(row, row + m);
      for (std::size_t j = 0; j < m; ++j) scores[j] += std::exp(row[j] - mx);
    }
  }
  return scores;
}

std::vector<double> we_ph1_scores_direct(const std::vector<double>& a, std::size_t heads, std::size_t m) {
  std::vector<double> maxes(heads * m, -INFINITY);
  for (std::size_t k = 0; k < a.size(); ++k) maxes[k / m] = std::max(maxes[k / m], a[k]);
  std::vector<double> scores(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double col = 0.0;
    for (std::size_t r = 0; r < heads * m; ++r) col += std::exp(a[r * m + j] - maxes[r]);
    scores[j] = col;
  }
  return scores;
}

double masked_mean(const std::vector<double>& values, const std::vector<int>& mask) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask.at(i) != 0) {
      sum += values[i];
      ++count;
    }
  }
  if (count == 0) throw std::domain_error("masked mean over an empty mask");
  return sum / static_cast<double>(count);
}

std::vector<int> filter_bits(const std::vector<double>& scores, double median) {
  std::vector<int> bits;
  for (double s : scores) bits.push_back(median < s ? 1 : 0);
  return bits;
}

std::vector<std::size_t> keep_set_by_rank(const std::vector<double>& scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (scores[j] > scores[i] || (scores[j] == scores[i] && j < i)) ++ahead;
    }
    if (ahead < n / 2) out.push_back(i);
  }
  return out;
}

OracleReport compare(std::string case_id, std::string inputs, double oracle_output, double system_output,
                     double tolerance) {
  OracleReport r;
  r.case_id = std::move(case_id);
  r.inputs = std::move(inputs);
  r.oracle_output = oracle_output;
  r.system_output = system_output;
  r.discrepancy = std::fabs(oracle_output - system_output);
  r.tolerance = tolerance;
  r.pass = r.discrepancy <= tolerance;
  return r;
}

}  // namespace dropsim::oracle
