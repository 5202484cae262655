#include "dropsim/pipeline.hpp"

#include "dropsim/errors.hpp"
#include "dropsim/omsel.hpp"
#include "dropsim/plaintext.hpp"

namespace dropsim {
namespace {

CostCounts minus(CostCounts a, const CostCounts& b) {
  a.cmp -= b.cmp;
  a.mux -= b.mux;
  a.mul -= b.mul;
  a.recip -= b.recip;
  a.trunc -= b.trunc;
  a.open -= b.open;
  a.rounds -= b.rounds;
  a.bytes -= b.bytes;
  return a;
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kBaseline: return "baseline";
    case Scheme::kPostDrop: return "post_drop";
    case Scheme::kPreDrop: return "pre_drop";
  }
  return "?";
}

CostCounts measure_drop_machinery(Scheme scheme, std::size_t m, const MachinerySetup& setup) {
  if (scheme == Scheme::kBaseline) return {};
  SessionOptions opts = setup.session;
  opts.seed = derive_seed(setup.session.seed, {static_cast<std::uint64_t>(scheme), m});
  Session s(opts);
  std::mt19937_64 rng(derive_seed(opts.seed, {1}));
  const std::vector<Matrix> logits = random_attention(m, setup.shape, rng);
  const unsigned ell = s.ring().ell();
  const std::size_t d = setup.shape.d_model;
  const std::size_t h = setup.shape.heads;
  CostCounts extra;

  if (scheme == Scheme::kPreDrop) {
    const AttentionMatrix a = share_attention(s, flatten_heads(logits), m, h);
    const ScoreVector scores = tie_break_scores(s, aggregate_scores(s, a, setup.mcn));
    const OmselResult sel = omsel(s, scores, setup.omsel);
    StageScope scope(s.ledger(), stage::kDropOverhead);
    keep_bits(s, scores, sel.median);
    extra += compaction_plan_cost(m, setup.network, s.costs(), ell);
    extra += compaction_apply_cost(m, h * m + 2 * d, setup.network, s.costs(), ell);
    extra += compaction_apply_cost(m, h * (m / 2), setup.network, s.costs(), ell);
    return minus(s.ledger().total(), s.ledger().stage(stage::kSoftmax)) + extra;
  }

  std::vector<Matrix> probs;
  for (const Matrix& a : logits) probs.push_back(softmax_rows(a));
  const ScoreVector scores = tie_break_scores(s, s.share_fixed(softmax_column_scores(probs)));
  {
    StageScope scope(s.ledger(), stage::kBitonic);
    const SharedValue median = bitonic_median(s, scores);
    StageScope overhead(s.ledger(), stage::kDropOverhead);
    keep_bits(s, scores, median);
  }
  extra += compaction_plan_cost(m, setup.network, s.costs(), ell);
  extra += compaction_apply_cost(m, 2 * d, setup.network, s.costs(), ell);
  return s.ledger().total() + extra;
}

const CostCounts& MachineryCache::get(Scheme scheme, std::size_t m) {
  const auto key = std::make_pair(scheme, m);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, measure_drop_machinery(scheme, m, setup_)).first;
  return it->second;
}

SchemeReport model_scheme_cost(std::size_t m0, const DropPlan& plan_in, Scheme scheme, const StageCostModel& model,
                               const NetProfile& net, MachineryCache& machinery) {
  DropPlan plan = plan_in;
  plan.m0 = m0;
  plan.validate();
  net.validate();

  SchemeReport rep;
  rep.scheme = scheme;
  rep.profile = net.name;
  rep.m0 = m0;
  rep.schedule = scheme == Scheme::kBaseline ? std::vector<std::size_t>{m0} : plan.schedule();

  std::size_t m = m0;
  for (unsigned layer = 1; layer <= plan.num_layers; ++layer) {
    const bool drop = scheme != Scheme::kBaseline && plan.is_drop_layer(layer);
    const double full = static_cast<double>(m);
    const double half = full / 2;
    for (Stage st : kAllStages) {
      double t = model.time(st, full, net);
      if (drop && scheme == Scheme::kPreDrop) {
        if (st == Stage::kQkv) {
          // Q and K see every token; V is projected from the kept half.
          t = 2.0 / 3.0 * model.time(st, full, net) + 1.0 / 3.0 * model.time(st, half, net);
        } else if (st != Stage::kQxK) {
          t = model.time(st, half, net);
        }
      } else if (drop && scheme == Scheme::kPostDrop) {
        const bool after_drop = st != Stage::kQkv && st != Stage::kQxK && st != Stage::kSoftmax && st != Stage::kXv;
        if (after_drop) t = model.time(st, half, net);
      }
      rep.rows.push_back({layer, m, stage_name(st), t, {}});
    }
    if (drop) {
      const CostCounts& c = machinery.get(scheme, m);
      rep.rows.push_back({layer, m, "drop", ledger_time(c, net, model.calibration().op_seconds), c});
      rep.machinery += c;
      m /= 2;
    }
  }
  for (const StageRow& r : rep.rows) rep.total_s += r.time_s;
  return rep;
}

}  // namespace dropsim
