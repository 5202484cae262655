#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dropsim/ledger.hpp"
#include "dropsim/mcn.hpp"
#include "dropsim/omsel.hpp"
#include "dropsim/session.hpp"

namespace dropsim {

// m tokens of `width` shared fixed-point entries each, row-major.
struct TokenMatrix {
  std::size_t m = 0;
  std::size_t width = 0;
  SharedVector rows;

  void validate() const;
};

TokenMatrix share_tokens(Session& s, const std::vector<double>& values, std::size_t m, std::size_t width);

// Public, input-independent drop schedule. Layers are 1-based.
struct DropPlan {
  std::vector<unsigned> drop_layers{1, 5, 8};
  std::size_t m0 = 128;
  unsigned num_layers = 12;

  // Throws DomainError on unsorted/duplicate/out-of-range layers or when m0
  // cannot be halved at every listed layer.
  void validate() const;
  bool is_drop_layer(unsigned layer) const;
  // Tokens entering `layer`.
  std::size_t tokens_at(unsigned layer) const;
  // m0 followed by the count after each drop, e.g. 128,64,32,16.
  std::vector<std::size_t> schedule() const;
};

/// bit_i = [median < score_i]; N Cmp.
SharedVector keep_bits(Session& s, const ScoreVector& scores, const SharedValue& median);

/// score_i * N + (N - 1 - i): makes scores distinct, lower index wins ties.
ScoreVector tie_break_scores(Session& s, const ScoreVector& scores);

enum class CompactionNetwork : std::uint8_t {
  kLogShift,              // kept rows move left by their drop-offset, one bit per stage
  kOddEvenTransposition,  // N passes of adjacent conditional swaps
};

const char* compaction_network_name(CompactionNetwork n);

// Secret per-stage selectors derived from the keep bits once and reusable for
// any number of payloads.
struct CompactionSchedule {
  CompactionNetwork network = CompactionNetwork::kLogShift;
  std::size_t n = 0;
  std::vector<SharedVector> selectors;
};

/// Builds the selectors. With debug checks on, a keep count other than N/2
/// throws DiagnosticError.
CompactionSchedule plan_compaction(Session& s, const SharedVector& bits, CompactionNetwork network);

/// Moves kept rows (each `width` wide) to the front in their original order
/// and returns the first n/2 rows.
SharedVector apply_compaction(Session& s, const CompactionSchedule& plan, const SharedVector& rows,
                              std::size_t width);

TokenMatrix oblivious_compact(Session& s, const TokenMatrix& tokens, const SharedVector& bits,
                              CompactionNetwork network = CompactionNetwork::kLogShift);

/// Ledger charge of plan_compaction / apply_compaction, without executing.
CostCounts compaction_plan_cost(std::size_t n, CompactionNetwork network, const CostTable& table, unsigned ell);
CostCounts compaction_apply_cost(std::size_t n, std::size_t width, CompactionNetwork network,
                                 const CostTable& table, unsigned ell);

struct DropSiteConfig {
  McnConfig mcn;
  OmselConfig omsel;
  CompactionNetwork network = CompactionNetwork::kLogShift;
};

struct DropSiteResult {
  AttentionMatrix attention;
  TokenMatrix v_input;
  TokenMatrix residual;
  SharedVector keep;  // empty when the layer does not drop
  OmselResult selection;
  bool dropped = false;
};

/// Scores A with MCN, selects the median with OMSel, and compacts A's rows
/// and columns, the V-projection input and the residual stream with the same
/// keep bits. Layers outside the plan pass through unchanged.
DropSiteResult drop_site(Session& s, const AttentionMatrix& a, const TokenMatrix& v_input,
                         const TokenMatrix& residual, const DropPlan& plan, unsigned layer,
                         const DropSiteConfig& cfg = {});

}  // namespace dropsim
