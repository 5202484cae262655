#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dropsim/primitives.hpp"
#include "dropsim/session.hpp"

namespace dropsim {

// How the pivot of the current round was produced. It selects the rule that
// computes the done bit.
enum class PivotKind : std::uint8_t {
  kRandomElement,  // RDM first round
  kActiveMean,     // ceil(mean of alive scores)
  kConstantN,      // sum of alive scores divided by the public N
};

// Pseudo-partition state. The vector length never shrinks; eliminated
// elements are masked by secret alive bits. The target rank starts public
// (N/2) and becomes secret once it is adjusted by a secret partition size.
struct PivotState {
  std::uint32_t round_index = 0;  // rounds completed so far
  std::size_t n = 0;
  SharedVector alive_mask;
  SharedValue alive_count;
  SharedValue target_rank;
  SharedValue pivot;
  PivotKind pivot_kind = PivotKind::kRandomElement;
  SharedBit done;  // set by omsel_round; the only value the driver opens
};

struct OmselConfig {
  bool divide_by_constant_n = false;  // pivot = masked sum / N instead of / active count
  unsigned max_rounds = 0;            // 0 selects 4 * ceil(log2 N) + 8

  unsigned effective_max_rounds(std::size_t n) const;
};

struct OmselResult {
  SharedValue median;
  unsigned rounds = 0;
  bool fell_back = false;
  // Alive count entering each round, read at the dealer. Instrumentation for
  // cost diagnostics; the parties never see it.
  std::vector<std::size_t> active_counts;
};

/// All elements alive, count N, target rank N/2.
PivotState omsel_initial_state(std::size_t n);

/// scores[(r1 + r2) mod N] as an inner product with the dealer's one-hot
/// mask (N Beaver multiplications).
SharedValue rdm_first_pivot(Session& s, const SharedVector& scores, const SharedVector& onehot);

/// One pseudo-partition round against state.pivot: N Cmp and N Mux over every
/// index, plus constant rank bookkeeping. Returns the next state with its
/// done bit computed but not opened.
PivotState omsel_round(Session& s, PivotState state, const SharedVector& scores);

/// ceil(sum(alive_i * score_i) / alive_count), or the constant-N variant.
/// An empty active set throws ProtocolError.
SharedValue avg_pivot(Session& s, const PivotState& state, const SharedVector& scores, const OmselConfig& cfg);

/// Rank-N/2 smallest element (1-based). N must be even and >= 2. Only the
/// per-round done bits are opened. Falls back to bitonic_median if the round
/// budget runs out.
OmselResult omsel(Session& s, const SharedVector& scores, const OmselConfig& cfg = {});

/// Median through a full bitonic sorting network, each compare-exchange being
/// one Cmp and two Mux. Lengths that are not powers of two are padded with
/// public +inf sentinels.
SharedValue bitonic_median(Session& s, const SharedVector& scores);

/// Comparator count of the padded bitonic network: (N/4) log2 N (log2 N + 1).
std::uint64_t bitonic_comparators(std::size_t n);

}  // namespace dropsim
