#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "dropsim/cost_model.hpp"
#include "dropsim/errors.hpp"
#include "dropsim/pipeline.hpp"

namespace dropsim {
namespace {

double lan_layer_time(const StageCostModel& m, double tokens) {
  double t = 0;
  for (Stage s : kAllStages) t += m.time(s, tokens, NetProfile::lan());
  return t;
}

TEST(CalibrationTest, DefaultsReproduceReferenceLayer) {
  const Calibration c = Calibration::defaults();
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(std::accumulate(c.share.begin(), c.share.end(), 0.0), 1.0, 1e-12);
  const double ln = c.share[4] + c.share[6] + c.share[8];
  EXPECT_NEAR(ln, 0.34, 1e-12);
  const StageCostModel m(c);
  EXPECT_NEAR(lan_layer_time(m, 128), 268.8, 1e-9);
  EXPECT_NEAR(m.time(Stage::kSoftmax, 128, NetProfile::lan()), 0.22 * 268.8, 1e-9);
}

TEST(CalibrationTest, QuadraticStagesScaleWithSquare) {
  const StageCostModel m;
  const double q128 = m.cost(Stage::kQxK, 128).compute_s;
  EXPECT_NEAR(m.cost(Stage::kQxK, 64).compute_s, q128 / 4, 1e-9);
  const double l128 = m.cost(Stage::kLn3, 128).compute_s;
  EXPECT_NEAR(m.cost(Stage::kLn3, 64).compute_s, l128 / 2, 1e-9);
  EXPECT_EQ(stage_exponent(Stage::kSoftmax), 2);
  EXPECT_EQ(stage_exponent(Stage::kGelu), 1);
}

TEST(CalibrationTest, LoaderOverridesAndRejects) {
  std::istringstream ok("# tweak\nshare.QKV = 0.13\nshare.GELU=0.07  # moved\nop_seconds = 1e-6\n");
  const Calibration c = load_calibration(ok);
  EXPECT_DOUBLE_EQ(c.share[0], 0.13);
  EXPECT_DOUBLE_EQ(c.op_seconds, 1e-6);
  std::istringstream unknown("share.Bogus = 0.1\n");
  EXPECT_THROW(load_calibration(unknown), DomainError);
  std::istringstream nan_value("op_seconds = fast\n");
  EXPECT_THROW(load_calibration(nan_value), DomainError);
  std::istringstream bad_sum("share.QKV = 0.5\n");
  EXPECT_THROW(load_calibration(bad_sum), DomainError);
}

TEST(CostModelTest, StageNamesRoundTrip) {
  for (Stage s : kAllStages) EXPECT_EQ(stage_from_name(stage_name(s)), s);
  EXPECT_FALSE(stage_from_name("nope").has_value());
}

TEST(CostModelTest, TimeFormula) {
  const NetProfile net{"x", 8e6, 0.01};
  EXPECT_DOUBLE_EQ(stage_time({2.0, 10, 1e6}, net), 2.0 + 0.1 + 1.0);
  CostCounts c;
  c.cmp = 10;
  c.mux = 5;
  c.rounds = 3;
  c.bytes = 1000;
  EXPECT_NEAR(ledger_time(c, net, 1e-3), 15e-3 + 0.03 + 1e-3, 1e-12);
  EXPECT_THROW((NetProfile{"bad", 0, 1}.validate()), DomainError);
  EXPECT_EQ(NetProfile::named("wan")->bandwidth_bps, 200e6);
  EXPECT_FALSE(NetProfile::named("custom").has_value());
}

TEST(PipelineTest, ZeroDropPlanHasUnitSpeedup) {
  const StageCostModel model;
  MachineryCache cache({});
  const DropPlan none{{}, 128, 12};
  const auto base = model_scheme_cost(128, none, Scheme::kBaseline, model, NetProfile::wan(), cache);
  const auto pre = model_scheme_cost(128, none, Scheme::kPreDrop, model, NetProfile::wan(), cache);
  EXPECT_EQ(base.total_s, pre.total_s);
  EXPECT_EQ(pre.schedule, (std::vector<std::size_t>{128}));
}

TEST(PipelineTest, OrderingAtReferenceSize) {
  const StageCostModel model;
  MachineryCache cache({});
  for (const NetProfile& net : {NetProfile::lan(), NetProfile::wan(), NetProfile::mobile()}) {
    const double b = model_scheme_cost(128, {}, Scheme::kBaseline, model, net, cache).total_s;
    const double post = model_scheme_cost(128, {}, Scheme::kPostDrop, model, net, cache).total_s;
    const double pre = model_scheme_cost(128, {}, Scheme::kPreDrop, model, net, cache).total_s;
    EXPECT_LT(pre, post) << net.name;
    EXPECT_LT(post, b) << net.name;
    EXPECT_TRUE(std::isfinite(b));
  }
}

TEST(PipelineTest, MachineryIsMemoizedAndSchemeSpecific) {
  MachineryCache cache({});
  const CostCounts& pre = cache.get(Scheme::kPreDrop, 32);
  const CostCounts& post = cache.get(Scheme::kPostDrop, 32);
  EXPECT_GT(pre.cmp, 0u);
  EXPECT_EQ(post.cmp, bitonic_comparators(32) + 32 + compaction_plan_cost(32, CompactionNetwork::kLogShift, {}, 64).cmp);
  EXPECT_EQ(&cache.get(Scheme::kPreDrop, 32), &pre);
  EXPECT_EQ(cache.get(Scheme::kBaseline, 32), CostCounts{});
}

}  // namespace
}  // namespace dropsim
