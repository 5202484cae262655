#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "dropsim/oracle/oracle.hpp"

namespace dropsim::oracle {
namespace {

TEST(OracleTest, MedianConvention) {
  EXPECT_DOUBLE_EQ(sort_median(std::vector<double>{0.9, 0.1, 0.5, 0.7, 0.3, 0.8, 0.2, 0.6}), 0.5);
  EXPECT_DOUBLE_EQ(sort_median(std::vector<double>{3, 1, 2}), 2);
  EXPECT_THROW(sort_median(std::vector<double>{}), std::domain_error);
}

TEST(OraclePropertyTest, TwoSelectionRoutinesAgree) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<std::int64_t> v(n);
    for (auto& x : v) x = static_cast<std::int64_t>(rng() % 20) - 10;
    ASSERT_EQ(sort_median(v), select_rank(v, (n + 1) / 2));
  }
}

TEST(OraclePropertyTest, Ph1TraversalsAgree) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0, 3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng() % 10, h = 1 + rng() % 3;
    std::vector<double> a(h * m * m);
    for (auto& x : a) x = nd(rng);
    const auto p = we_ph1_scores(a, h, m), q = we_ph1_scores_direct(a, h, m);
    for (std::size_t j = 0; j < m; ++j) ASSERT_NEAR(p[j], q[j], 1e-9 * (1 + p[j]));
  }
}

TEST(OracleTest, FiltersAndMeans) {
  EXPECT_EQ(filter_bits({0.9, 0.1, 0.5, 0.7}, 0.5), (std::vector<int>{1, 0, 0, 1}));
  EXPECT_EQ(stable_filter(std::vector<int>{5, 6, 7, 8}, {0, 1, 0, 1}), (std::vector<int>{6, 8}));
  EXPECT_DOUBLE_EQ(masked_mean({1, 2, 3, 4}, {1, 0, 1, 0}), 2.0);
  EXPECT_THROW(masked_mean({1, 2}, {0, 0}), std::domain_error);
  EXPECT_EQ(keep_set_by_rank({2, 2, 1, 3}), (std::vector<std::size_t>{0, 3}));
}

TEST(OracleTest, CompareReport) {
  const OracleReport r = compare("c1", "x=1", 1.0, 1.0005, 1e-3);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.discrepancy, 5e-4, 1e-12);
  EXPECT_FALSE(compare("c2", "", 1.0, 1.1, 1e-3).pass);
}

}  // namespace
}  // namespace dropsim::oracle
