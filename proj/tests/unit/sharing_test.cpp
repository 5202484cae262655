#include <gtest/gtest.h>

#include <random>

#include "dropsim/dealer.hpp"
#include "dropsim/errors.hpp"
#include "dropsim/primitives.hpp"
#include "dropsim/session.hpp"
#include "dropsim/sharing.hpp"

namespace dropsim {
namespace {

TEST(SharingTest, MaskedShareExample) {
  const Ring r({64, 12});
  const RingElement x = r.encode(1.5);
  const SharedValue v = share_with_mask(r, x, RingElement{0x1234});
  EXPECT_EQ(v.part[0].value, 0x1234u);
  EXPECT_EQ(reconstruct(r, v), x);
  EXPECT_EQ(reconstruct(r, v.share(Party::kP0), v.share(Party::kP1)), x);
}

TEST(SharingTest, ReconstructRejectsSameParty) {
  const Ring r({64, 12});
  const SharedValue v = share_with_mask(r, RingElement{5}, RingElement{9});
  EXPECT_THROW(reconstruct(r, v.share(Party::kP0), v.share(Party::kP0)), ProtocolError);
  EXPECT_THROW(add_local(r, v.share(Party::kP0), v.share(Party::kP1)), ProtocolError);
}

TEST(SharingPropertyTest, LinearOpsAreLocalAndExact) {
  std::mt19937_64 rng(3);
  for (unsigned ell : {32u, 64u}) {
    const Ring r({ell, 12});
    for (int t = 0; t < 2000; ++t) {
      const RingElement x = r.reduce(rng()), y = r.reduce(rng()), c = r.reduce(rng());
      const SharedValue sx = share(r, x, rng), sy = share(r, y, rng);
      ASSERT_EQ(reconstruct(r, add_local(r, sx, sy)), r.add(x, y));
      ASSERT_EQ(reconstruct(r, sub_local(r, sx, sy)), r.sub(x, y));
      ASSERT_EQ(reconstruct(r, add_public(r, sx, c)), r.add(x, c));
      ASSERT_EQ(reconstruct(r, scale_public(r, sx, c)), r.mul(x, c));
      ASSERT_EQ(reconstruct(r, public_constant(c)), c);
    }
  }
}

TEST(SharingTest, VectorOpsAndSum) {
  const Ring r({48, 12});
  std::mt19937_64 rng(5);
  std::vector<RingElement> xs;
  RingElement total{0};
  for (std::uint64_t i = 0; i < 20; ++i) {
    xs.push_back(r.reduce(rng()));
    total = r.add(total, xs.back());
  }
  const SharedVector v = share_vector(r, xs, rng);
  EXPECT_EQ(reconstruct(r, v), xs);
  EXPECT_EQ(reconstruct(r, sum_local(r, v)), total);
  const SharedVector sl = v.slice(3, 4);
  ASSERT_EQ(sl.size(), 4u);
  EXPECT_EQ(reconstruct(r, sl.at(0)), xs[3]);
  const auto doubled = reconstruct(r, add_local(r, v, v));
  EXPECT_EQ(doubled[7], r.add(xs[7], xs[7]));
}

TEST(DealerTest, TriplesAreConsistentAndUnique) {
  const Ring r({64, 12});
  Dealer d(r, 42);
  for (int t = 0; t < 100; ++t) {
    const BeaverTriple tr = d.make_triple();
    EXPECT_EQ(tr.id, static_cast<std::uint64_t>(t));
    EXPECT_EQ(reconstruct(r, tr.c), r.mul(reconstruct(r, tr.a), reconstruct(r, tr.b)));
  }
}

TEST(DealerTest, OnehotSelectsSumOfContributions) {
  const Ring r({64, 12});
  Dealer d(r, 1);
  const DealerSetup setup = dealer_setup(d, 3, 8, 5, 6);
  EXPECT_EQ(setup.triples.size(), 3u);
  const auto bits = reconstruct(r, setup.onehot);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(bits[i].value, i == 3 ? 1u : 0u);
  EXPECT_THROW(dealer_setup(d, 1, 0), DomainError);
}

TEST(SessionTest, TripleReuseIsRejected) {
  Session s(SessionOptions{});
  const BeaverTriple t = s.dealer().make_triple();
  const SharedValue x = s.share(RingElement{3}), y = s.share(RingElement{4});
  EXPECT_EQ(s.open_at_dealer(mul_beaver(s, x, y, t)).value, 12u);
  EXPECT_THROW(mul_beaver(s, x, y, t), ProtocolError);
}

TEST(SessionTest, SameSeedSameShares) {
  SessionOptions o;
  o.seed = 99;
  Session a(o), b(o);
  const SharedValue va = a.share(RingElement{17}), vb = b.share(RingElement{17});
  EXPECT_EQ(va.part, vb.part);
}

}  // namespace
}  // namespace dropsim
