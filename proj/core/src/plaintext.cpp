#include "dropsim/plaintext.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dropsim/errors.hpp"

namespace dropsim {
namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
  }
  return m;
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = m.row(static_cast<Eigen::Index>(idx[k]));
  return out;
}

Matrix select_square(const Matrix& m, const std::vector<std::size_t>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
  }
  return out;
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string("non-finite values in ") + what);
}

}  // namespace

LayerWeights LayerWeights::random(std::size_t d, std::size_t heads, std::size_t ffn_mult, std::mt19937_64& rng) {
  if (heads == 0 || d % heads != 0) throw DomainError("d_model must be a multiple of the head count");
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  LayerWeights w;
  w.heads = heads;
  w.wq = gaussian(d, d, s, rng);
  w.wk = gaussian(d, d, s, rng);
  w.wv = gaussian(d, d, s, rng);
  w.wc = gaussian(d, d, s, rng);
  w.w1 = gaussian(d, d * ffn_mult, s, rng);
  w.w2 = gaussian(d * ffn_mult, d, 1.0 / std::sqrt(static_cast<double>(d * ffn_mult)), rng);
  const auto dd = static_cast<Eigen::Index>(d);
  w.ln1_gamma = Vector::Ones(dd);
  w.ln1_beta = Vector::Zero(dd);
  w.ln2_gamma = Vector::Ones(dd);
  w.ln2_beta = Vector::Zero(dd);
  return w;
}

std::vector<Matrix> attention_logits(const Matrix& input, const LayerWeights& w) {
  const Eigen::Index d = w.wq.rows();
  const auto heads = static_cast<Eigen::Index>(w.heads);
  const Eigen::Index dh = d / heads;
  const Matrix q = input * w.wq;
  const Matrix k = input * w.wk;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Matrix> out;
  for (Eigen::Index h = 0; h < heads; ++h) {
    out.push_back(q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose() * scale);
  }
  return out;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - mx).exp().matrix();
    out.row(i) = e / e.sum();
  }
  return out;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

Matrix layer_norm(const Matrix& x, const Vector& gamma, const Vector& beta, double eps) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    const double var = (x.row(i).array() - mean).square().mean();
    out.row(i) = ((x.row(i).array() - mean) / std::sqrt(var + eps)).matrix();
    out.row(i) = out.row(i).cwiseProduct(gamma.transpose()) + beta.transpose();
  }
  return out;
}

std::vector<double> mcn_scores_plain(const std::vector<Matrix>& logits, double offset, unsigned exponent) {
  std::vector<double> scores(logits.empty() ? 0 : static_cast<std::size_t>(logits.front().cols()), 0.0);
  for (const Matrix& a : logits) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double mx = a.row(i).maxCoeff() + offset;
      if (!(mx > 0)) throw DomainError("MCN needs positive row maxima; raise the offset");
      const double denom = std::pow(mx, static_cast<double>(exponent));
      for (Eigen::Index j = 0; j < a.cols(); ++j) scores[static_cast<std::size_t>(j)] += (a(i, j) + offset - mx) / denom;
    }
  }
  return scores;
}

std::vector<double> softmax_column_scores(const std::vector<Matrix>& probs) {
  std::vector<double> scores(probs.empty() ? 0 : static_cast<std::size_t>(probs.front().cols()), 0.0);
  for (const Matrix& p : probs) {
    const Eigen::RowVectorXd col = p.colwise().sum();
    for (Eigen::Index j = 0; j < col.size(); ++j) scores[static_cast<std::size_t>(j)] += col(j);
  }
  return scores;
}

std::vector<std::size_t> median_keep_set(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(scores.size() / 2);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<double> flatten_heads(const std::vector<Matrix>& per_head) {
  std::vector<double> out;
  for (const Matrix& m : per_head) {
    const auto flat = flatten_rows(m);
    out.insert(out.end(), flat.begin(), flat.end());
  }
  return out;
}

std::vector<double> flatten_rows(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

LayerTrace plaintext_layer_traced(const Matrix& input, const LayerWeights& w, DropMode mode,
                                  const PlainDropConfig& cfg) {
  require_finite(input, "layer input");
  const auto m = static_cast<std::size_t>(input.rows());
  const Eigen::Index d = w.wq.rows();
  const Eigen::Index dh = d / static_cast<Eigen::Index>(w.heads);

  LayerTrace t;
  t.kept.resize(m);
  std::iota(t.kept.begin(), t.kept.end(), std::size_t{0});
  t.logits = attention_logits(input, w);
  Matrix v_input = input;
  Matrix residual = input;

  if (mode == DropMode::kPreSoftmax) {
    t.kept = median_keep_set(mcn_scores_plain(t.logits, cfg.mcn_offset, cfg.mcn_exponent));
    for (Matrix& a : t.logits) a = select_square(a, t.kept);
    v_input = select_rows(input, t.kept);
    residual = v_input;
  }

  const Matrix v = v_input * w.wv;
  Matrix concat(v.rows(), d);
  for (std::size_t h = 0; h < w.heads; ++h) {
    t.softmax.push_back(softmax_rows(t.logits[h]));
    const auto hh = static_cast<Eigen::Index>(h);
    concat.middleCols(hh * dh, dh) = t.softmax.back() * v.middleCols(hh * dh, dh);
  }
  t.attention_out = concat * w.wc;

  if (mode == DropMode::kPostSoftmax) {
    t.kept = median_keep_set(softmax_column_scores(t.softmax));
    t.attention_out = select_rows(t.attention_out, t.kept);
    residual = select_rows(input, t.kept);
  }

  const Matrix z = layer_norm(t.attention_out + residual, w.ln1_gamma, w.ln1_beta);
  const Matrix hidden = (z * w.w1).unaryExpr([](double x) { return gelu(x); });
  t.output = layer_norm(z + hidden * w.w2, w.ln2_gamma, w.ln2_beta);
  require_finite(t.output, "layer output");
  return t;
}

Matrix plaintext_layer(const Matrix& input, const LayerWeights& w, DropMode mode, const PlainDropConfig& cfg) {
  return plaintext_layer_traced(input, w, mode, cfg).output;
}

}  // namespace dropsim
