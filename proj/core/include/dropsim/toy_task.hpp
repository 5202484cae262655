#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dropsim/mcn.hpp"
#include "dropsim/omsel.hpp"
#include "dropsim/plaintext.hpp"
#include "dropsim/ring.hpp"

namespace dropsim {

enum class Scorer : std::uint8_t { kMcn, kSoftmaxPh1 };

const char* scorer_name(Scorer s);  // mcn, softmax_ph1

// Planted-signal attention task. Every row attends the signal columns with an
// extra `signal_logit`; with outliers on, a cluster of sink tokens exchanges
// extreme logits among itself.
struct ToyTaskConfig {
  std::size_t tokens = 64;
  std::size_t signal = 4;
  double signal_logit = 6.0;
  bool outliers = true;
  double sink_fraction = 0.375;
  double outlier_lo = 20.0;
  double outlier_hi = 40.0;
  unsigned drops = 3;  // halvings applied in sequence
  std::size_t embed_dim = 16;
  double embed_signal = 3.0;  // class signal carried by signal-token embeddings

  void validate() const;
};

struct ToyInstance {
  Matrix logits;
  std::vector<std::size_t> signal_idx;
  Matrix embeddings;
  int label = 1;  // +1 or -1
};

ToyInstance make_toy_instance(const ToyTaskConfig& cfg, std::mt19937_64& rng);

struct ToyScorerOptions {
  RingParams ring;
  McnConfig mcn;
  OmselConfig omsel;
};

struct ToyRunResult {
  std::optional<double> retention;  // empty without signal tokens
  bool probe_correct = false;
  std::vector<std::size_t> kept;
};

/// One seeded instance through the drop schedule. The MCN scorer runs the
/// secure path (MCN, OMSel, keep bits); the Ph-1 scorer runs in plaintext.
/// The instance depends on the seed only, not on the scorer.
ToyRunResult toy_accuracy_run(const ToyTaskConfig& cfg, Scorer scorer, std::uint64_t seed,
                              const ToyScorerOptions& opts = {});

struct ToyReport {
  Scorer scorer = Scorer::kMcn;
  ToyTaskConfig task;
  std::vector<ToyRunResult> runs;
  std::optional<double> mean_retention;
  double probe_accuracy = 0;
};

ToyReport toy_accuracy_report(const ToyTaskConfig& cfg, Scorer scorer, std::uint64_t seed, std::size_t runs,
                              const ToyScorerOptions& opts = {});

/// Column sums of exp(A - rowmax) without normalization.
std::vector<double> ph1_column_scores(const Matrix& logits);

}  // namespace dropsim
