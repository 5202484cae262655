#include "dropsim/sharing.hpp"

#include "dropsim/errors.hpp"

namespace dropsim {

SharedVector::SharedVector(std::vector<RingElement> p0, std::vector<RingElement> p1)
    : part_{std::move(p0), std::move(p1)} {
  if (part_[0].size() != part_[1].size()) {
    throw ProtocolError("share vectors differ in length");
  }
}

SharedVector SharedVector::slice(std::size_t begin, std::size_t count) const {
  auto first0 = part_[0].begin() + static_cast<std::ptrdiff_t>(begin);
  auto first1 = part_[1].begin() + static_cast<std::ptrdiff_t>(begin);
  return SharedVector({first0, first0 + static_cast<std::ptrdiff_t>(count)},
                      {first1, first1 + static_cast<std::ptrdiff_t>(count)});
}

SharedValue share_with_mask(const Ring& ring, RingElement x, RingElement r) {
  return {{ring.reduce(r.value), ring.sub(x, r)}};
}

SharedValue share(const Ring& ring, RingElement x, std::mt19937_64& rng) {
  return share_with_mask(ring, x, ring.reduce(rng()));
}

SharedVector share_vector(const Ring& ring, const std::vector<RingElement>& xs, std::mt19937_64& rng) {
  SharedVector out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out.set(i, share(ring, xs[i], rng));
  return out;
}

RingElement reconstruct(const Ring& ring, const AdditiveShare& s0, const AdditiveShare& s1) {
  if (s0.party == s1.party) throw ProtocolError("reconstruct needs one share from each party");
  return ring.add(s0.value, s1.value);
}

RingElement reconstruct(const Ring& ring, const SharedValue& v) { return ring.add(v.part[0], v.part[1]); }

std::vector<RingElement> reconstruct(const Ring& ring, const SharedVector& v) {
  std::vector<RingElement> out(v.size());
  const auto& p0 = v.party(Party::kP0);
  const auto& p1 = v.party(Party::kP1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ring.add(p0[i], p1[i]);
  return out;
}

AdditiveShare add_local(const Ring& ring, const AdditiveShare& a, const AdditiveShare& b) {
  if (a.party != b.party) throw ProtocolError("add_local on shares of different parties");
  return {a.party, ring.add(a.value, b.value)};
}

SharedValue add_local(const Ring& ring, const SharedValue& a, const SharedValue& b) {
  return {{ring.add(a.part[0], b.part[0]), ring.add(a.part[1], b.part[1])}};
}

SharedValue sub_local(const Ring& ring, const SharedValue& a, const SharedValue& b) {
  return {{ring.sub(a.part[0], b.part[0]), ring.sub(a.part[1], b.part[1])}};
}

namespace {

template <typename Op>
SharedVector zip(const SharedVector& a, const SharedVector& b, Op op) {
  if (a.size() != b.size()) throw ProtocolError("vector length mismatch");
  SharedVector out(a.size());
  for (Party p : {Party::kP0, Party::kP1}) {
    const auto& x = a.party(p);
    const auto& y = b.party(p);
    auto& z = out.party(p);
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = op(x[i], y[i]);
  }
  return out;
}

}  // namespace

SharedVector add_local(const Ring& ring, const SharedVector& a, const SharedVector& b) {
  return zip(a, b, [&](RingElement x, RingElement y) { return ring.add(x, y); });
}

SharedVector sub_local(const Ring& ring, const SharedVector& a, const SharedVector& b) {
  return zip(a, b, [&](RingElement x, RingElement y) { return ring.sub(x, y); });
}

SharedValue public_constant(RingElement c) { return {{c, RingElement{0}}}; }

SharedValue add_public(const Ring& ring, const SharedValue& x, RingElement c) {
  return {{ring.add(x.part[0], c), x.part[1]}};
}

SharedValue scale_public(const Ring& ring, const SharedValue& x, RingElement c) {
  return {{ring.mul(x.part[0], c), ring.mul(x.part[1], c)}};
}

SharedValue sum_local(const Ring& ring, const SharedVector& v) {
  SharedValue acc;
  for (Party p : {Party::kP0, Party::kP1}) {
    RingElement s{0};
    for (RingElement e : v.party(p)) s = ring.add(s, e);
    acc.part[static_cast<int>(p)] = s;
  }
  return acc;
}

}  // namespace dropsim
