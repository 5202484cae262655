#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dropsim/errors.hpp"
#include "dropsim/primitives.hpp"
#include "dropsim/trace.hpp"

namespace dropsim {
namespace {

Session make_session(std::uint64_t seed = 1, unsigned ell = 64) {
  SessionOptions o;
  o.seed = seed;
  o.ring = {ell, 12};
  return Session(o);
}

TEST(PrimitivesTest, FixedProductExample) {
  Session s = make_session();
  const SharedValue x = s.share(s.ring().encode(1.5));
  const SharedValue y = s.share(s.ring().encode(-2.25));
  EXPECT_DOUBLE_EQ(s.ring().decode(s.open_at_dealer(mul_fixed(s, x, y))), -3.375);
}

TEST(PrimitivesTest, MulChargesOneBatch) {
  Session s = make_session();
  const SharedVector x = s.share_fixed({1, 2, 3, 4});
  const SharedVector y = s.share_fixed({1, 1, 1, 1});
  s.ledger().reset();
  mul_beaver(s, x, y);
  EXPECT_EQ(s.ledger().total().mul, 4u);
  EXPECT_EQ(s.ledger().total().rounds, 1u);
  EXPECT_EQ(s.ledger().total().bytes, 4u * 4u * 64u / 8u);
}

TEST(PrimitivesPropertyTest, MulFixedWithinOneQuantum) {
  Session s = make_session(8);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  const double q = s.ring().quantum();
  for (int t = 0; t < 2000; ++t) {
    const double a = s.ring().decode(s.ring().encode(dist(rng)));
    const double b = s.ring().decode(s.ring().encode(dist(rng)));
    const SharedValue p = mul_fixed(s, s.share(s.ring().encode(a)), s.share(s.ring().encode(b)));
    ASSERT_LE(std::fabs(s.ring().decode(s.open_at_dealer(p)) - a * b), q) << a << " * " << b;
  }
}

TEST(PrimitivesPropertyTest, CmpMatchesSignedOrder) {
  std::mt19937_64 rng(21);
  for (unsigned ell : {32u, 64u}) {
    Session s = make_session(21, ell);
    const Ring& r = s.ring();
    const std::int64_t half = std::int64_t{1} << (ell - 2);
    std::uniform_int_distribution<std::int64_t> dist(-half, half);
    for (int t = 0; t < 3000; ++t) {
      const std::int64_t a = dist(rng), b = (t % 10 == 0) ? a : dist(rng);
      const SharedBit c = secure_cmp(s, s.share(r.from_signed(a)), s.share(r.from_signed(b)));
      ASSERT_EQ(s.open_at_dealer(c.v).value, a < b ? 1u : 0u);
    }
  }
}

TEST(PrimitivesTest, CmpAndMuxCosts) {
  Session s = make_session();
  const SharedVector x = s.share_fixed({1, 2, 3});
  const SharedVector y = s.share_fixed({3, 2, 1});
  s.ledger().reset();
  const SharedVector c = secure_cmp(s, x, y);
  EXPECT_EQ(s.ledger().total().cmp, 3u);
  EXPECT_EQ(s.ledger().total().rounds, 6u);  // ceil(log2 64)
  EXPECT_EQ(s.ledger().total().bytes, 3u * 64u * 16u);
  const SharedVector m = secure_mux(s, c, x, y);
  EXPECT_EQ(s.ledger().total().mux, 3u);
  EXPECT_EQ(s.ledger().total().rounds, 7u);
  const auto v = s.open_at_dealer(m);
  EXPECT_DOUBLE_EQ(s.ring().decode(v[0]), 1.0);
  EXPECT_DOUBLE_EQ(s.ring().decode(v[1]), 2.0);
  EXPECT_DOUBLE_EQ(s.ring().decode(v[2]), 1.0);
}

TEST(PrimitivesTest, MuxRejectsNonBitSelector) {
  Session s = make_session();
  const SharedBit bad{s.share(RingElement{2})};
  EXPECT_THROW(secure_mux(s, bad, s.share(RingElement{1}), s.share(RingElement{0})), ProtocolError);
}

TEST(PrimitivesTest, TracedPrefixMarksBookkeeping) {
  Session s = make_session();
  s.trace().enable(true);
  const SharedVector x = s.share_fixed({1, 2, 3, 4});
  secure_cmp(s, x, x, 2);
  const auto& ev = s.trace().events();
  ASSERT_EQ(ev.size(), 4u);
  EXPECT_EQ(ev[0].index, 0);
  EXPECT_EQ(ev[1].index, 1);
  EXPECT_EQ(ev[2].index, -1);
  EXPECT_EQ(ev[3].index, -1);
}

TEST(PrimitivesTest, RecipAndDomain) {
  Session s = make_session();
  const SharedValue r = secure_recip(s, s.share(s.ring().encode(4.0)));
  EXPECT_NEAR(s.ring().decode(s.open_at_dealer(r)), 0.25, s.ring().quantum());
  EXPECT_THROW(secure_recip(s, s.share(s.ring().encode(0.0))), DomainError);
  EXPECT_THROW(secure_recip(s, s.share(s.ring().encode(-1.0))), DomainError);
}

TEST(PrimitivesPropertyTest, DivPublicWithinOneUnit) {
  Session s = make_session(4);
  const Ring& r = s.ring();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> dist(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
  for (int t = 0; t < 5000; ++t) {
    const std::int64_t a = dist(rng);
    const std::uint64_t n = 1 + rng() % 300;
    const std::int64_t got = r.to_signed(s.open_at_dealer(secure_div_public(s, s.share(r.from_signed(a)), n)));
    const double exact = static_cast<double>(a) / static_cast<double>(n);
    ASSERT_LE(std::fabs(static_cast<double>(got) - exact), 1.0) << a << "/" << n;
  }
  EXPECT_THROW(secure_div_public(s, s.share(RingElement{1}), 0), DomainError);
}

TEST(PrimitivesTest, DivSharedIsCeil) {
  Session s = make_session();
  const Ring& r = s.ring();
  auto div = [&](std::int64_t a, std::int64_t b) {
    return r.to_signed(s.open_at_dealer(secure_div_shared(s, s.share(r.from_signed(a)), s.share(r.from_signed(b)))));
  };
  EXPECT_EQ(div(7, 2), 4);
  EXPECT_EQ(div(8, 2), 4);
  EXPECT_EQ(div(-7, 2), -3);
  EXPECT_EQ(div(-8, 2), -4);
  EXPECT_THROW(div(1, 0), ProtocolError);
}

TEST(PrimitivesTest, TruncateRoundsToNearest) {
  Session s = make_session();
  const Ring& r = s.ring();
  // 1.5 quanta after the shift rounds up; -1.5 rounds toward +inf as well.
  const SharedValue a = truncate(s, s.share(r.from_signed(3 << 11)));
  EXPECT_EQ(r.to_signed(s.open_at_dealer(a)), 2);
  const SharedValue b = truncate(s, s.share(r.from_signed(-(3 << 11))));
  EXPECT_EQ(r.to_signed(s.open_at_dealer(b)), -1);
}

TEST(PrimitivesTest, OpenBit) {
  Session s = make_session();
  EXPECT_TRUE(open_bit(s, SharedBit{s.share(RingElement{1})}));
  EXPECT_FALSE(open_bit(s, SharedBit{s.share(RingElement{0})}));
  EXPECT_THROW(open_bit(s, SharedBit{s.share(RingElement{5})}), ProtocolError);
  EXPECT_EQ(s.ledger().total().open, 2u);
}

TEST(LedgerTest, StageScopesNestAndRestore) {
  CostLedger l;
  CostTable t;
  {
    StageScope a(l, stage::kMcn);
    l.charge(t.mul_charge(2, 64));
    {
      StageScope b(l, stage::kOmsel);
      l.charge(t.cmp_charge(3, 64));
    }
    EXPECT_EQ(l.stage_tag(), stage::kMcn);
  }
  EXPECT_EQ(l.stage_tag(), "untagged");
  EXPECT_EQ(l.stage(stage::kMcn).mul, 2u);
  EXPECT_EQ(l.stage(stage::kOmsel).cmp, 3u);
  EXPECT_EQ(l.total().rounds, 1u + 6u);
  EXPECT_EQ(l.stage("absent"), CostCounts{});
}

TEST(LedgerTest, CmpRoundsOverride) {
  CostTable t;
  EXPECT_EQ(t.effective_cmp_rounds(64), 6u);
  EXPECT_EQ(t.effective_cmp_rounds(40), 6u);
  EXPECT_EQ(t.effective_cmp_rounds(32), 5u);
  t.cmp_rounds = 4;
  EXPECT_EQ(t.effective_cmp_rounds(64), 4u);
  t.cmp_lambda_factor = 0;
  EXPECT_THROW(t.validate(), DomainError);
}

TEST(TraceTest, PartitionCoverage) {
  std::vector<TraceEvent> ev;
  for (std::uint32_t r = 1; r <= 2; ++r) {
    for (std::int64_t i = 0; i < 4; ++i) ev.push_back({r, TraceOp::kCmp, i});
    ev.push_back({r, TraceOp::kCmp, -1});
    for (std::int64_t i = 0; i < 4; ++i) ev.push_back({r, TraceOp::kMux, i});
  }
  EXPECT_TRUE(verify_partition_coverage(ev, 4).ok);
  auto skip = ev;
  skip.erase(skip.begin() + 2);
  EXPECT_FALSE(verify_partition_coverage(skip, 4).ok);
  auto twice = ev;
  twice.push_back({2, TraceOp::kMux, 0});
  EXPECT_FALSE(verify_partition_coverage(twice, 4).ok);
  EXPECT_TRUE(compare_traces(ev, ev).ok);
  EXPECT_FALSE(compare_traces(ev, skip).ok);
}

TEST(TraceTest, JsonLines) {
  const std::vector<TraceEvent> ev{{1, TraceOp::kCmp, 3}, {1, TraceOp::kOpen, -1}};
  EXPECT_EQ(trace_to_jsonl(ev),
            "{\"index\":3,\"op\":\"cmp\",\"round\":1}\n{\"index\":null,\"op\":\"open\",\"round\":1}\n");
}

}  // namespace
}  // namespace dropsim
