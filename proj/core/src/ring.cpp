#include "dropsim/ring.hpp"

#include <cmath>
#include <string>

#include "dropsim/errors.hpp"

namespace dropsim {

void RingParams::validate() const {
  if (ell < 32 || ell > 64) {
    throw DomainError("ring width must be in [32, 64], got " + std::to_string(ell));
  }
  if (frac_bits < 2 || frac_bits + 8 >= ell) {
    throw DomainError("fractional bits must satisfy 2 <= f < ell - 8, got f=" +
                      std::to_string(frac_bits));
  }
}

Ring::Ring(RingParams params) : params_(params) {
  params_.validate();
  mask_ = params_.ell == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << params_.ell) - 1;
}

std::int64_t Ring::to_signed(RingElement a) const {
  std::uint64_t v = a.value & mask_;
  if (params_.ell < 64 && (v >> (params_.ell - 1)) != 0) {
    v |= ~mask_;
  }
  return static_cast<std::int64_t>(v);
}

double Ring::quantum() const { return std::ldexp(1.0, -static_cast<int>(params_.frac_bits)); }

RingElement Ring::encode(double x) const {
  const double limit = std::ldexp(1.0, static_cast<int>(params_.ell - params_.frac_bits - 1));
  if (!std::isfinite(x) || std::fabs(x) >= limit) {
    throw RangeError("value out of fixed-point range: " + std::to_string(x));
  }
  const double scaled = std::ldexp(x, static_cast<int>(params_.frac_bits));
  return from_signed(std::llround(scaled));
}

double Ring::decode(RingElement a) const {
  return std::ldexp(static_cast<double>(to_signed(a)), -static_cast<int>(params_.frac_bits));
}

RingElement encode_fixed(double x, const RingParams& params) { return Ring(params).encode(x); }

double decode_fixed(RingElement a, const RingParams& params) { return Ring(params).decode(a); }

}  // namespace dropsim
