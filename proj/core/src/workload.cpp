#include "dropsim/workload.hpp"

#include <array>

namespace dropsim {

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)};
  for (std::uint64_t t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<Matrix> random_attention(std::size_t m, const SyntheticAttentionConfig& cfg, std::mt19937_64& rng) {
  const LayerWeights w = LayerWeights::random(cfg.d_model, cfg.heads, 1, rng);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(cfg.d_model));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = dist(rng);
  }
  return attention_logits(x, w);
}

std::vector<double> mcn_shaped_scores(std::size_t m, std::mt19937_64& rng, const SyntheticAttentionConfig& cfg,
                                      double offset, unsigned exponent) {
  return mcn_scores_plain(random_attention(m, cfg, rng), offset, exponent);
}

std::vector<double> uniform_scores(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

}  // namespace dropsim
