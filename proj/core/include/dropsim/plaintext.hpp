#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <random>
#include <vector>

namespace dropsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Weights of one encoder layer. Biases are omitted (zero).
struct LayerWeights {
  std::size_t heads = 1;
  Matrix wq, wk, wv, wc;  // d x d
  Matrix w1, w2;          // d x f, f x d
  Vector ln1_gamma, ln1_beta, ln2_gamma, ln2_beta;

  std::size_t d_model() const { return static_cast<std::size_t>(wq.rows()); }
  // Gaussian weights with variance 1/fan_in.
  static LayerWeights random(std::size_t d_model, std::size_t heads, std::size_t ffn_mult, std::mt19937_64& rng);
};

enum class DropMode { kNone, kPreSoftmax, kPostSoftmax };

struct PlainDropConfig {
  double mcn_offset = 4.0;
  unsigned mcn_exponent = 2;
};

// Intermediates of one forward pass, for tests and equivalence checks.
struct LayerTrace {
  std::vector<Matrix> logits;   // per head, after any pre-Softmax drop
  std::vector<Matrix> softmax;  // per head
  Matrix attention_out;         // after the output projection (ln2 input)
  Matrix output;
  std::vector<std::size_t> kept;  // surviving token indices, ascending
};

/// Per-head Q_h K_h^T / sqrt(d/H).
std::vector<Matrix> attention_logits(const Matrix& input, const LayerWeights& w);
Matrix softmax_rows(const Matrix& logits);
double gelu(double x);
Matrix layer_norm(const Matrix& x, const Vector& gamma, const Vector& beta, double eps = 1e-5);

/// Column sums of (A + offset - max)/max^n over rows and heads.
std::vector<double> mcn_scores_plain(const std::vector<Matrix>& logits, double offset, unsigned exponent);
/// Column sums of Softmax probabilities over rows and heads.
std::vector<double> softmax_column_scores(const std::vector<Matrix>& probs);
/// Indices of the N/2 highest scores, ascending; ties go to the lower index.
std::vector<std::size_t> median_keep_set(const std::vector<double>& scores);

/// Row-major [h][i][j] copy of per-head matrices.
std::vector<double> flatten_heads(const std::vector<Matrix>& per_head);
std::vector<double> flatten_rows(const Matrix& m);

/// Forward pass of one layer with an optional drop. Throws NumericError on
/// non-finite inputs or results.
LayerTrace plaintext_layer_traced(const Matrix& input, const LayerWeights& w, DropMode mode,
                                  const PlainDropConfig& cfg = {});
Matrix plaintext_layer(const Matrix& input, const LayerWeights& w, DropMode mode, const PlainDropConfig& cfg = {});

}  // namespace dropsim
