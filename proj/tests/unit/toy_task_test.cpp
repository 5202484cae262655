#include <gtest/gtest.h>

#include <random>

#include "dropsim/errors.hpp"
#include "dropsim/oracle/oracle.hpp"
#include "dropsim/toy_task.hpp"

namespace dropsim {
namespace {

TEST(ToyTaskTest, InstanceShape) {
  ToyTaskConfig cfg;
  std::mt19937_64 rng(1);
  const ToyInstance inst = make_toy_instance(cfg, rng);
  EXPECT_EQ(inst.logits.rows(), 64);
  EXPECT_EQ(inst.logits.cols(), 64);
  EXPECT_EQ(inst.signal_idx.size(), 4u);
  EXPECT_EQ(inst.embeddings.rows(), 64);
  EXPECT_TRUE(inst.label == 1 || inst.label == -1);
}

TEST(ToyTaskTest, ValidationRejectsBadConfigs) {
  ToyTaskConfig cfg;
  cfg.tokens = 63;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.signal = 100;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.drops = 7;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(ToyTaskTest, NoSignalGivesNoRetention) {
  ToyTaskConfig cfg;
  cfg.signal = 0;
  cfg.drops = 1;
  const ToyRunResult r = toy_accuracy_run(cfg, Scorer::kSoftmaxPh1, 5);
  EXPECT_FALSE(r.retention.has_value());
  EXPECT_EQ(r.kept.size(), 32u);
}

TEST(ToyTaskTest, DeterministicPerSeed) {
  ToyTaskConfig cfg;
  cfg.tokens = 32;
  cfg.drops = 2;
  const ToyRunResult a = toy_accuracy_run(cfg, Scorer::kMcn, 17);
  const ToyRunResult b = toy_accuracy_run(cfg, Scorer::kMcn, 17);
  EXPECT_EQ(a.kept, b.kept);
  EXPECT_EQ(a.retention, b.retention);
  EXPECT_EQ(a.kept.size(), 8u);
}

TEST(ToyTaskTest, MildDropKeepsSignalForBothScorers) {
  ToyTaskConfig cfg;
  cfg.tokens = 32;
  cfg.drops = 1;
  cfg.outliers = false;
  for (Scorer sc : {Scorer::kMcn, Scorer::kSoftmaxPh1}) {
    const ToyReport rep = toy_accuracy_report(cfg, sc, 3, 10);
    ASSERT_TRUE(rep.mean_retention.has_value());
    EXPECT_GE(*rep.mean_retention, 0.99) << scorer_name(sc);
  }
}

TEST(ToyTaskTest, Ph1ScoresMatchOracle) {
  std::mt19937_64 rng(2);
  Matrix a(5, 5);
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  std::vector<double> flat;
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) flat.push_back(a(i, j));
  }
  const auto got = ph1_column_scores(a);
  const auto want = oracle::we_ph1_scores_direct(flat, 1, 5);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(got[j], want[j], 1e-12);
}

}  // namespace
}  // namespace dropsim
