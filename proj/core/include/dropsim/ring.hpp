#pragma once

#include <cstdint>

namespace dropsim {

struct RingParams {
  unsigned ell = 64;        // ring is Z_{2^ell}
  unsigned frac_bits = 12;  // fixed-point fractional bits

  // Throws DomainError unless 32 <= ell <= 64 and 2 <= frac_bits < ell - 8.
  void validate() const;
};

struct RingElement {
  std::uint64_t value = 0;

  friend constexpr bool operator==(RingElement, RingElement) = default;
};

// Arithmetic modulo 2^ell on uint64 carriers. Reduction is a mask, which is
// compatible with native wraparound because 2^ell divides 2^64.
class Ring {
 public:
  explicit Ring(RingParams params);

  const RingParams& params() const { return params_; }
  unsigned ell() const { return params_.ell; }
  unsigned frac_bits() const { return params_.frac_bits; }
  std::uint64_t mask() const { return mask_; }

  RingElement reduce(std::uint64_t v) const { return {v & mask_}; }
  RingElement add(RingElement a, RingElement b) const { return reduce(a.value + b.value); }
  RingElement sub(RingElement a, RingElement b) const { return reduce(a.value - b.value); }
  RingElement mul(RingElement a, RingElement b) const { return reduce(a.value * b.value); }
  RingElement neg(RingElement a) const { return reduce(0 - a.value); }

  // Two's-complement view: values >= 2^(ell-1) are negative.
  std::int64_t to_signed(RingElement a) const;
  RingElement from_signed(std::int64_t v) const { return reduce(static_cast<std::uint64_t>(v)); }

  // Largest positive signed value, 2^(ell-1) - 1.
  RingElement max_signed() const { return {mask_ >> 1}; }

  // Fixed-point codec. encode rounds to nearest; throws RangeError when
  // |x| >= 2^(ell - f - 1) or x is not finite.
  RingElement encode(double x) const;
  double decode(RingElement a) const;
  // Weight of one quantum, 2^-f.
  double quantum() const;

 private:
  RingParams params_;
  std::uint64_t mask_;
};

RingElement encode_fixed(double x, const RingParams& params);
double decode_fixed(RingElement a, const RingParams& params);

}  // namespace dropsim
