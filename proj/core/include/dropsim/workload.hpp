#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "dropsim/plaintext.hpp"

namespace dropsim {

// Independent stream seed for a (base seed, tag...) case key.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

struct SyntheticAttentionConfig {
  std::size_t d_model = 32;
  std::size_t heads = 4;
};

/// Scaled logits of a random layer applied to Gaussian token embeddings.
std::vector<Matrix> random_attention(std::size_t m, const SyntheticAttentionConfig& cfg, std::mt19937_64& rng);

/// Aggregated MCN scores of random_attention(m): the default OMSel workload.
std::vector<double> mcn_shaped_scores(std::size_t m, std::mt19937_64& rng, const SyntheticAttentionConfig& cfg = {},
                                      double offset = 4.0, unsigned exponent = 2);

/// Independent uniform reals in [lo, hi).
std::vector<double> uniform_scores(std::size_t n, std::mt19937_64& rng, double lo = -8.0, double hi = 8.0);

}  // namespace dropsim
