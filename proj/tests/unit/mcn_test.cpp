#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dropsim/errors.hpp"
#include "dropsim/mcn.hpp"
#include "dropsim/oracle/oracle.hpp"

namespace dropsim {
namespace {

const std::vector<double> kLogits{0.5, -1, 2, 1.5, 0.25, -0.75, 3, 1, 0, -2, 0, 1, 0.5, 0.5, 2.5, 1.25, -0.5, 0.75};

std::vector<double> decode_all(Session& s, const SharedVector& v) {
  std::vector<double> out;
  for (const auto& e : s.open_at_dealer(v)) out.push_back(s.ring().decode(e));
  return out;
}

TEST(McnTest, AggregateMatchesFrozenValues) {
  Session s(SessionOptions{});
  const AttentionMatrix a = share_attention(s, kLogits, 3, 2);
  const auto got = decode_all(s, aggregate_scores(s, a, McnConfig{}));
  const std::vector<double> expected{-0.20900394, -0.31630132, -0.15374524};
  ASSERT_EQ(got.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(got[j], expected[j], 6 * std::ldexp(1.0, -10)) << j;
}

TEST(McnTest, OracleAgreesWithFrozenValues) {
  const auto o = oracle::mcn_aggregate(kLogits, 2, 3, 4.0, 2);
  EXPECT_NEAR(o[0], -0.20900394, 1e-8);
  EXPECT_NEAR(o[1], -0.31630132, 1e-8);
  EXPECT_NEAR(o[2], -0.15374524, 1e-8);
}

TEST(McnTest, LedgerTagsSplitMaxAndNormalization) {
  Session s(SessionOptions{});
  const AttentionMatrix a = share_attention(s, kLogits, 3, 2);
  s.ledger().reset();
  aggregate_scores(s, a, McnConfig{});
  const CostCounts max_cost = s.ledger().stage(stage::kSoftmax);
  const CostCounts mcn_cost = s.ledger().stage(stage::kMcn);
  // Six rows of three: two comparisons and two muxes each.
  EXPECT_EQ(max_cost.cmp, 12u);
  EXPECT_EQ(max_cost.mux, 12u);
  EXPECT_EQ(mcn_cost.cmp, 0u);
  EXPECT_EQ(mcn_cost.recip, 6u);
  EXPECT_GT(mcn_cost.mul, 0u);
}

TEST(McnTest, RowMaxAndDomain) {
  Session s(SessionOptions{});
  const SharedVector row = s.share_fixed({0.5, 7.25, -3, 7.0, 2});
  EXPECT_DOUBLE_EQ(s.ring().decode(s.open_at_dealer(secure_row_max(s, row))), 7.25);
  EXPECT_THROW(secure_row_max(s, SharedVector{}), DomainError);
  const SharedValue zero = s.share(s.ring().encode(0.0));
  EXPECT_THROW(mcn_row(s, row, zero, 2), DomainError);
}

TEST(McnTest, RowsMaxMatchesPerRow) {
  Session s(SessionOptions{});
  const SharedVector rows = s.share_fixed({1, 5, 2, 9, -1, -2, -3, -0.5, 4, 4, 4, 4});
  const auto got = decode_all(s, secure_rows_max(s, rows, 4));
  EXPECT_EQ(got, (std::vector<double>{9, -0.5, 4}));
}

// Row generator: length 2..64, values uniform in [lo, hi] with hi - lo random.
struct RowCase {
  std::vector<double> values;
};

RowCase gen_row(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(2, 64);
  std::uniform_real_distribution<double> centre(-3, 6), spread(0.1, 8);
  const int n = len(rng);
  const double c = centre(rng), w = spread(rng);
  std::uniform_real_distribution<double> v(c - w, c + w);
  RowCase rc;
  for (int i = 0; i < n; ++i) rc.values.push_back(v(rng));
  return rc;
}

TEST(McnPropertyTest, MaxToZeroOrderAndCompression) {
  Session s(SessionOptions{});
  std::mt19937_64 rng(606);
  const double tol = std::ldexp(1.0, -10);
  for (int t = 0; t < 300; ++t) {
    RowCase rc = gen_row(rng);
    const double offset = 4.0;
    for (auto& x : rc.values) x = s.ring().decode(s.ring().encode(x + offset));
    const double mx = *std::max_element(rc.values.begin(), rc.values.end());
    if (mx <= 0.25) continue;
    const SharedVector row = s.share_fixed(rc.values);
    const SharedValue m = secure_row_max(s, row);
    const auto out = decode_all(s, mcn_row(s, row, m, 2));
    const auto ref = oracle::mcn_row(rc.values, mx, 2);
    for (std::size_t j = 0; j < out.size(); ++j) {
      ASSERT_NEAR(out[j], ref[j], tol + 1e-6 * std::fabs(ref[j])) << t << "," << j;
      if (rc.values[j] == mx) ASSERT_NEAR(out[j], 0.0, tol);
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (rc.values[j] < rc.values[k] - 2 * tol * mx * mx) ASSERT_LE(out[j], out[k] + tol);
      }
      if (mx > 1.0) ASSERT_LE(std::fabs(out[j]), std::fabs(rc.values[j] - mx) + tol);
    }
  }
}

}  // namespace
}  // namespace dropsim

namespace dropsim {
namespace {

TEST(McnPropertyTest, AggregateIsExactInRingSemantics) {
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + rng() % 20, h = 1 + rng() % 3;
    std::normal_distribution<double> nd(0, 2 + t % 5);
    std::vector<double> logits(h * m * m);
    for (auto& x : logits) x = nd(rng);
    Session s(SessionOptions{});
    const AttentionMatrix a = share_attention(s, logits, m, h);
    std::vector<std::int64_t> fixed;
    for (const auto& e : s.open_at_dealer(a.entries)) fixed.push_back(s.ring().to_signed(e));
    // Rows whose shifted maximum is not positive are outside the domain.
    bool positive = true;
    for (std::size_t r = 0; r < h * m; ++r) {
      positive = positive && *std::max_element(fixed.begin() + r * m, fixed.begin() + (r + 1) * m) + 4 * 4096 > 0;
    }
    if (!positive) continue;
    const auto want = oracle::mcn_aggregate_fixed(fixed, h, m, 12, 4 * 4096, 2);
    std::vector<std::int64_t> got;
    for (const auto& e : s.open_at_dealer(aggregate_scores(s, a, McnConfig{}))) got.push_back(s.ring().to_signed(e));
    ASSERT_EQ(got, want) << "t=" << t;
  }
}

}  // namespace
}  // namespace dropsim
