#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dropsim/errors.hpp"
#include "dropsim/ring.hpp"

namespace dropsim {
namespace {

TEST(RingParamsTest, ValidatesBounds) {
  EXPECT_NO_THROW((RingParams{64, 12}.validate()));
  EXPECT_NO_THROW((RingParams{32, 12}.validate()));
  EXPECT_THROW((RingParams{31, 12}.validate()), DomainError);
  EXPECT_THROW((RingParams{65, 12}.validate()), DomainError);
  EXPECT_THROW((RingParams{64, 1}.validate()), DomainError);
  EXPECT_THROW((RingParams{32, 24}.validate()), DomainError);
  EXPECT_NO_THROW((RingParams{32, 23}.validate()));
}

TEST(RingTest, EncodeExamples) {
  const RingParams p{64, 12};
  EXPECT_EQ(encode_fixed(1.5, p).value, 6144u);
  EXPECT_EQ(encode_fixed(0.0, p).value, 0u);
  EXPECT_EQ(encode_fixed(-0.0625, p).value, ~std::uint64_t{0} - 255);  // 2^64 - 256
  const RingParams q{32, 12};
  EXPECT_EQ(encode_fixed(-0.0625, q).value, (std::uint64_t{1} << 32) - 256);
}

TEST(RingTest, EncodeRejectsOutOfRange) {
  const Ring r({32, 12});
  EXPECT_NO_THROW(r.encode(524287.0));
  EXPECT_THROW(r.encode(524288.0), RangeError);  // 2^(32-12-1)
  EXPECT_THROW(r.encode(-524288.0), RangeError);
  EXPECT_THROW(r.encode(NAN), RangeError);
}

TEST(RingTest, SignedViewIsTwosComplement) {
  const Ring r({40, 12});
  EXPECT_EQ(r.to_signed(r.from_signed(-1)), -1);
  EXPECT_EQ(r.to_signed(RingElement{(std::uint64_t{1} << 39)}), -(std::int64_t{1} << 39));
  EXPECT_EQ(r.to_signed(r.max_signed()), (std::int64_t{1} << 39) - 1);
  EXPECT_EQ(r.add(r.max_signed(), RingElement{1}).value, std::uint64_t{1} << 39);
}

TEST(RingPropertyTest, DecodeInvertsEncodeWithinHalfQuantum) {
  std::mt19937_64 rng(7);
  for (unsigned ell : {32u, 48u, 64u}) {
    const Ring r({ell, 12});
    const double bound = std::ldexp(1.0, static_cast<int>(ell - 12 - 1)) * 0.999;
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int t = 0; t < 10000; ++t) {
      const double x = dist(rng);
      ASSERT_LE(std::fabs(r.decode(r.encode(x)) - x), std::ldexp(1.0, -13) + 1e-9 * std::fabs(x)) << x;
    }
  }
}

TEST(RingPropertyTest, ArithmeticIsModular) {
  std::mt19937_64 rng(11);
  const Ring r({37, 12});
  const std::uint64_t mod = std::uint64_t{1} << 37;
  for (int t = 0; t < 10000; ++t) {
    const RingElement a = r.reduce(rng());
    const RingElement b = r.reduce(rng());
    ASSERT_EQ(r.add(a, b).value, (a.value + b.value) % mod);
    ASSERT_EQ(r.sub(a, b).value, (a.value + mod - b.value) % mod);
    ASSERT_EQ(r.mul(a, b).value, static_cast<std::uint64_t>((static_cast<unsigned __int128>(a.value) * b.value) % mod));
  }
}

}  // namespace
}  // namespace dropsim
