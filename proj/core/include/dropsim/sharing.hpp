#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dropsim/ring.hpp"

namespace dropsim {

enum class Party : std::uint8_t { kP0 = 0, kP1 = 1 };

struct AdditiveShare {
  Party party = Party::kP0;
  RingElement value;
};

// Both parties' shares of one secret. The simulator runs the two parties in
// lockstep inside one process, so a shared value carries both halves; a
// party's view is `part[0]` or `part[1]` alone.
struct SharedValue {
  std::array<RingElement, 2> part{};

  AdditiveShare share(Party p) const { return {p, part[static_cast<int>(p)]}; }
};

// Shares of a secret bit; reconstruction is in {0, 1}.
struct SharedBit {
  SharedValue v;
};

// Per-party share vectors of equal length.
class SharedVector {
 public:
  SharedVector() = default;
  explicit SharedVector(std::size_t n) : part_{std::vector<RingElement>(n), std::vector<RingElement>(n)} {}
  SharedVector(std::vector<RingElement> p0, std::vector<RingElement> p1);

  std::size_t size() const { return part_[0].size(); }
  bool empty() const { return part_[0].empty(); }

  SharedValue at(std::size_t i) const { return {{part_[0][i], part_[1][i]}}; }
  void set(std::size_t i, const SharedValue& v) {
    part_[0][i] = v.part[0];
    part_[1][i] = v.part[1];
  }
  void push_back(const SharedValue& v) {
    part_[0].push_back(v.part[0]);
    part_[1].push_back(v.part[1]);
  }

  const std::vector<RingElement>& party(Party p) const { return part_[static_cast<int>(p)]; }
  std::vector<RingElement>& party(Party p) { return part_[static_cast<int>(p)]; }

  // Elements [begin, begin + count).
  SharedVector slice(std::size_t begin, std::size_t count) const;

 private:
  std::array<std::vector<RingElement>, 2> part_;
};

// share(x) with explicit mask r: (r, x - r).
SharedValue share_with_mask(const Ring& ring, RingElement x, RingElement r);
SharedValue share(const Ring& ring, RingElement x, std::mt19937_64& rng);
SharedVector share_vector(const Ring& ring, const std::vector<RingElement>& xs, std::mt19937_64& rng);

// Throws ProtocolError unless the two shares belong to different parties.
RingElement reconstruct(const Ring& ring, const AdditiveShare& s0, const AdditiveShare& s1);
RingElement reconstruct(const Ring& ring, const SharedValue& v);
std::vector<RingElement> reconstruct(const Ring& ring, const SharedVector& v);

// Local operations, no communication. Party mismatch throws ProtocolError.
AdditiveShare add_local(const Ring& ring, const AdditiveShare& a, const AdditiveShare& b);
SharedValue add_local(const Ring& ring, const SharedValue& a, const SharedValue& b);
SharedValue sub_local(const Ring& ring, const SharedValue& a, const SharedValue& b);
SharedVector add_local(const Ring& ring, const SharedVector& a, const SharedVector& b);
SharedVector sub_local(const Ring& ring, const SharedVector& a, const SharedVector& b);

// Public constant c as shares (c, 0).
SharedValue public_constant(RingElement c);
// x + c, with c folded into party 0's share.
SharedValue add_public(const Ring& ring, const SharedValue& x, RingElement c);
// c * x for a public ring integer c.
SharedValue scale_public(const Ring& ring, const SharedValue& x, RingElement c);
// Sum of all elements (local).
SharedValue sum_local(const Ring& ring, const SharedVector& v);

}  // namespace dropsim
