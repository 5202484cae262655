#include "dropsim/primitives.hpp"

#include <string>

#include "dropsim/errors.hpp"

namespace dropsim {
namespace {

// Beaver arithmetic without ledger charges; callers account for the call.
SharedValue beaver_core(Session& s, const SharedValue& x, const SharedValue& y, const BeaverTriple& t) {
  s.consume(t);
  const Ring& r = s.ring();
  // Both parties open d = x - a and e = y - b.
  const RingElement d = reconstruct(r, sub_local(r, x, t.a));
  const RingElement e = reconstruct(r, sub_local(r, y, t.b));
  SharedValue z;
  for (int p = 0; p < 2; ++p) {
    RingElement v = r.add(t.c.part[p], r.add(r.mul(d, t.b.part[p]), r.mul(e, t.a.part[p])));
    if (p == 0) v = r.add(v, r.mul(d, e));
    z.part[p] = v;
  }
  return z;
}

void check_same_length(const SharedVector& a, const SharedVector& b, const char* op) {
  if (a.size() != b.size()) {
    throw ProtocolError(std::string(op) + ": length mismatch " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
}

void check_bit(Session& s, const SharedValue& c) {
  if (!s.debug_checks()) return;
  const RingElement v = s.open_at_dealer(c);
  if (v.value > 1) throw ProtocolError("selector does not reconstruct to a bit");
}

CostCounts mul_cost(const Session& s, std::uint64_t n) { return s.costs().mul_charge(n, s.ring().ell()); }
CostCounts trunc_cost(const Session& s, std::uint64_t n) { return s.costs().trunc_charge(n, s.ring().ell()); }
CostCounts cmp_cost(const Session& s, std::uint64_t n) { return s.costs().cmp_charge(n, s.ring().ell()); }
CostCounts mux_cost(const Session& s, std::uint64_t n) { return s.costs().mux_charge(n, s.ring().ell()); }
CostCounts recip_cost(const Session& s, std::uint64_t n) { return s.costs().recip_charge(n, s.ring().ell()); }

RingElement truncate_plain(const Ring& r, RingElement v) {
  const unsigned f = r.frac_bits();
  const std::int64_t x = r.to_signed(v);
  // Arithmetic shift floors, so adding half a unit first rounds to nearest.
  const std::int64_t rounded = (x + (std::int64_t{1} << (f - 1))) >> f;
  return r.from_signed(rounded);
}

}  // namespace

SharedValue mul_beaver(Session& s, const SharedValue& x, const SharedValue& y, const BeaverTriple& t) {
  SharedValue z = beaver_core(s, x, y, t);
  s.ledger().charge(mul_cost(s, 1));
  s.trace().record(TraceOp::kMul, -1);
  return z;
}

SharedValue mul_beaver(Session& s, const SharedValue& x, const SharedValue& y) {
  return mul_beaver(s, x, y, s.dealer().make_triple());
}

SharedVector mul_beaver(Session& s, const SharedVector& x, const SharedVector& y) {
  check_same_length(x, y, "mul_beaver");
  SharedVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z.set(i, beaver_core(s, x.at(i), y.at(i), s.dealer().make_triple()));
    s.trace().record(TraceOp::kMul, static_cast<std::int64_t>(i));
  }
  s.ledger().charge(mul_cost(s, x.size()));
  return z;
}

SharedValue truncate(Session& s, const SharedValue& x) {
  const SharedValue out = s.share(truncate_plain(s.ring(), s.open_at_dealer(x)));
  s.ledger().charge(trunc_cost(s, 1));
  return out;
}

SharedVector truncate(Session& s, const SharedVector& x) {
  std::vector<RingElement> plain = s.open_at_dealer(x);
  for (auto& v : plain) v = truncate_plain(s.ring(), v);
  s.ledger().charge(trunc_cost(s, x.size()));
  return s.share(plain);
}

SharedValue mul_fixed(Session& s, const SharedValue& x, const SharedValue& y) {
  return truncate(s, mul_beaver(s, x, y));
}

SharedVector mul_fixed(Session& s, const SharedVector& x, const SharedVector& y) {
  return truncate(s, mul_beaver(s, x, y));
}

SharedBit secure_cmp(Session& s, const SharedValue& x, const SharedValue& y) {
  const Ring& r = s.ring();
  const bool lt = r.to_signed(s.open_at_dealer(x)) < r.to_signed(s.open_at_dealer(y));
  s.ledger().charge(cmp_cost(s, 1));
  s.trace().record(TraceOp::kCmp, -1);
  return {s.share(RingElement{lt ? 1u : 0u})};
}

SharedVector secure_cmp(Session& s, const SharedVector& x, const SharedVector& y, std::size_t traced) {
  check_same_length(x, y, "secure_cmp");
  const Ring& r = s.ring();
  const auto px = s.open_at_dealer(x);
  const auto py = s.open_at_dealer(y);
  std::vector<RingElement> bits(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    bits[i] = RingElement{r.to_signed(px[i]) < r.to_signed(py[i]) ? 1u : 0u};
    s.trace().record(TraceOp::kCmp, i < traced ? static_cast<std::int64_t>(i) : -1);
  }
  s.ledger().charge(cmp_cost(s, x.size()));
  return s.share(bits);
}

SharedValue secure_mux(Session& s, const SharedBit& c, const SharedValue& a, const SharedValue& b) {
  check_bit(s, c.v);
  const Ring& r = s.ring();
  const SharedValue out =
      add_local(r, b, beaver_core(s, c.v, sub_local(r, a, b), s.dealer().make_triple()));
  s.ledger().charge(mux_cost(s, 1));
  s.trace().record(TraceOp::kMux, -1);
  return out;
}

SharedVector secure_mux(Session& s, const SharedVector& c, const SharedVector& a, const SharedVector& b,
                        std::size_t traced) {
  check_same_length(c, a, "secure_mux");
  check_same_length(a, b, "secure_mux");
  const Ring& r = s.ring();
  SharedVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const SharedValue ci = c.at(i);
    check_bit(s, ci);
    const SharedValue bi = b.at(i);
    out.set(i, add_local(r, bi, beaver_core(s, ci, sub_local(r, a.at(i), bi), s.dealer().make_triple())));
    s.trace().record(TraceOp::kMux, i < traced ? static_cast<std::int64_t>(i) : -1);
  }
  s.ledger().charge(mux_cost(s, a.size()));
  return out;
}

SharedVector secure_mux(Session& s, const SharedBit& c, const SharedVector& a, const SharedVector& b) {
  return secure_mux(s, broadcast(c.v, a.size()), a, b);
}

SharedValue secure_recip(Session& s, const SharedValue& x) {
  SharedVector v(1);
  v.set(0, x);
  return secure_recip(s, v).at(0);
}

SharedVector secure_recip(Session& s, const SharedVector& x) {
  const Ring& r = s.ring();
  std::vector<RingElement> plain = s.open_at_dealer(x);
  for (auto& v : plain) {
    const double d = r.decode(v);
    if (!(d > 0)) throw DomainError("reciprocal of non-positive value " + std::to_string(d));
    v = r.encode(1.0 / d);
  }
  s.ledger().charge(recip_cost(s, x.size()));
  return s.share(plain);
}

SharedValue secure_div_public(Session& s, const SharedValue& x, std::uint64_t n) {
  if (n == 0) throw DomainError("division by zero");
  const Ring& r = s.ring();
  const SharedValue y = add_local(r, x, s.dealer().zero_share());
  // Party 0 floors its share; party 1 floors the negation of its share and
  // negates back. Exact up to one quantum unless the shares fail to wrap.
  const RingElement t0{y.part[0].value / n};
  const RingElement u1 = r.neg(y.part[1]);
  const RingElement t1 = r.neg(RingElement{u1.value / n});
  return {{t0, t1}};
}

SharedValue secure_div_shared(Session& s, const SharedValue& num, const SharedValue& den) {
  const Ring& r = s.ring();
  const std::int64_t a = r.to_signed(s.open_at_dealer(num));
  const std::int64_t b = r.to_signed(s.open_at_dealer(den));
  if (b <= 0) throw ProtocolError("secret division by non-positive count");
  std::int64_t q = a / b;
  if (a % b != 0 && a > 0) ++q;  // C++ division truncates; this yields ceil
  s.ledger().charge(recip_cost(s, 1));
  s.trace().record(TraceOp::kDiv, -1);
  return s.share(r.from_signed(q));
}

bool open_bit(Session& s, const SharedBit& b) {
  const RingElement v = s.open_at_dealer(b.v);
  if (v.value > 1) throw ProtocolError("opened value is not a bit");
  s.ledger().charge(s.costs().open_charge(1, s.ring().ell()));
  s.trace().record(TraceOp::kOpen, -1);
  return v.value == 1;
}

SharedVector broadcast(const SharedValue& v, std::size_t n) {
  SharedVector out(n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, v);
  return out;
}

}  // namespace dropsim
