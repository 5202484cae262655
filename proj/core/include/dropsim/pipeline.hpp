#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dropsim/cost_model.hpp"
#include "dropsim/ledger.hpp"
#include "dropsim/mcn.hpp"
#include "dropsim/omsel.hpp"
#include "dropsim/session.hpp"
#include "dropsim/token_drop.hpp"
#include "dropsim/workload.hpp"

namespace dropsim {

enum class Scheme : std::uint8_t { kBaseline, kPostDrop, kPreDrop };

const char* scheme_name(Scheme s);  // baseline, post_drop, pre_drop

struct MachinerySetup {
  SessionOptions session;
  SyntheticAttentionConfig shape;
  McnConfig mcn;
  OmselConfig omsel;
  CompactionNetwork network = CompactionNetwork::kLogShift;
};

/// Ledger cost of one drop site at m tokens. Scoring, selection and keep bits
/// run on synthetic shares; compaction is added from its closed form.
///   pre_drop:  MCN + OMSel + keep bits + compaction of A (rows, then
///              columns), the V input and the residual. The row maxima are
///              excluded: they are the Softmax stage's own max, reused.
///   post_drop: bitonic median of Softmax column sums + keep bits +
///              compaction of the attention output and the residual.
CostCounts measure_drop_machinery(Scheme scheme, std::size_t m, const MachinerySetup& setup);

// Memoizes measure_drop_machinery per (scheme, m).
class MachineryCache {
 public:
  explicit MachineryCache(MachinerySetup setup) : setup_(std::move(setup)) {}
  const CostCounts& get(Scheme scheme, std::size_t m);
  const MachinerySetup& setup() const { return setup_; }

 private:
  MachinerySetup setup_;
  std::map<std::pair<Scheme, std::size_t>, CostCounts> cache_;
};

struct StageRow {
  unsigned layer = 0;
  std::size_t tokens = 0;  // tokens entering the layer
  std::string stage;       // a stage name, or "drop" for drop machinery
  double time_s = 0;
  CostCounts counts;       // ledger counts for "drop" rows
};

struct SchemeReport {
  Scheme scheme = Scheme::kBaseline;
  std::string profile;
  std::size_t m0 = 0;
  std::vector<std::size_t> schedule;  // token count per drop stage
  std::vector<StageRow> rows;
  CostCounts machinery;
  double total_s = 0;
};

/// Walks every layer of the plan and prices each stage at the token count it
/// sees under `scheme`. Throws DomainError on an invalid plan.
SchemeReport model_scheme_cost(std::size_t m0, const DropPlan& plan, Scheme scheme, const StageCostModel& model,
                               const NetProfile& net, MachineryCache& machinery);

}  // namespace dropsim
