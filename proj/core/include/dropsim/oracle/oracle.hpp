#pragma once

// Plaintext reference implementations for tests. Nothing here calls into the
// protocol library, so agreement between the two is evidence of correctness.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dropsim::oracle {

/// Full sort, element at rank ceil(len/2) (1-based). Throws std::domain_error
/// on empty input.
double sort_median(std::vector<double> v);
std::int64_t sort_median(std::vector<std::int64_t> v);

/// Rank-`rank` smallest (1-based) via std::nth_element; the second,
/// independent selection routine.
double select_rank(std::vector<double> v, std::size_t rank);
std::int64_t select_rank(std::vector<std::int64_t> v, std::size_t rank);

double row_max(const std::vector<double>& row);
/// (x - max) / max^n element-wise.
std::vector<double> mcn_row(const std::vector<double>& row, double max, unsigned exponent);
/// Column sums of MCN(A + offset) over rows and heads; A row-major [h][i][j].
std::vector<double> mcn_aggregate(const std::vector<double>& a, std::size_t heads, std::size_t m, double offset,
                                  unsigned exponent);

/// mcn_aggregate in ring semantics on signed fixed-point integers with f
/// fractional bits: reciprocal rounded to nearest, each product truncated
/// with round-half-up. `offset` is already encoded.
std::vector<std::int64_t> mcn_aggregate_fixed(const std::vector<std::int64_t>& a, std::size_t heads, std::size_t m,
                                              unsigned frac_bits, std::int64_t offset, unsigned exponent);

/// Column sums of exp(A - rowmax) over rows and heads.
std::vector<double> we_ph1_scores(const std::vector<double>& a, std::size_t heads, std::size_t m);
/// Same quantity, column-major traversal with a separate max pass.
std::vector<double> we_ph1_scores_direct(const std::vector<double>& a, std::size_t heads, std::size_t m);

/// Mean of values where mask is non-zero. Throws std::domain_error when the
/// mask is empty.
double masked_mean(const std::vector<double>& values, const std::vector<int>& mask);

/// bit_i = [median < score_i].
std::vector<int> filter_bits(const std::vector<double>& scores, double median);

/// Kept elements in original order.
template <typename T>
std::vector<T> stable_filter(const std::vector<T>& items, const std::vector<int>& keep) {
  if (items.size() != keep.size()) throw std::invalid_argument("stable_filter: length mismatch");
  std::vector<T> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (keep[i] != 0) out.push_back(items[i]);
  }
  return out;
}

/// Indices of the len/2 highest scores in ascending order, ties to the lower
/// index, by counting for each token how many others outrank it.
std::vector<std::size_t> keep_set_by_rank(const std::vector<double>& scores);

struct OracleReport {
  std::string case_id;
  std::string inputs;
  double oracle_output = 0;
  double system_output = 0;
  double discrepancy = 0;
  double tolerance = 0;
  bool pass = false;
};

OracleReport compare(std::string case_id, std::string inputs, double oracle_output, double system_output,
                     double tolerance);

}  // namespace dropsim::oracle
