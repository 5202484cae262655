#include "dropsim/omsel.hpp"

#include <bit>
#include <string>

#include "dropsim/errors.hpp"

namespace dropsim {
namespace {

std::size_t pow2_ceil(std::size_t n) { return std::bit_ceil(n); }

unsigned log2_ceil(std::size_t n) { return n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1)); }

// Exact value of the (single or all-equal) remaining alive elements.
SharedValue extract_alive(Session& s, const PivotState& state, const SharedVector& scores) {
  const SharedValue sum = sum_local(s.ring(), mul_beaver(s, state.alive_mask, scores));
  return secure_div_shared(s, sum, state.alive_count);
}

}  // namespace

unsigned OmselConfig::effective_max_rounds(std::size_t n) const {
  return max_rounds != 0 ? max_rounds : 4 * log2_ceil(n) + 8;
}

PivotState omsel_initial_state(std::size_t n) {
  PivotState st;
  st.n = n;
  st.alive_mask = broadcast(public_constant(RingElement{1}), n);
  st.alive_count = public_constant(RingElement{n});
  st.target_rank = public_constant(RingElement{n / 2});
  return st;
}

SharedValue rdm_first_pivot(Session& s, const SharedVector& scores, const SharedVector& onehot) {
  if (scores.size() != onehot.size()) {
    throw ProtocolError("one-hot mask has length " + std::to_string(onehot.size()) + ", scores have " +
                        std::to_string(scores.size()));
  }
  return sum_local(s.ring(), mul_beaver(s, onehot, scores));
}

PivotState omsel_round(Session& s, PivotState st, const SharedVector& scores) {
  const Ring& r = s.ring();
  const std::size_t n = scores.size();
  if (st.alive_mask.size() != n) throw ProtocolError("alive mask and scores differ in length");
  const SharedValue zero = public_constant(RingElement{0});
  const SharedValue one = public_constant(RingElement{1});
  const SharedValue two = public_constant(RingElement{2});

  // Partition every index against the pivot, alive or not.
  const SharedVector below_bits = secure_cmp(s, scores, broadcast(st.pivot, n));
  const SharedVector alive_below = mul_beaver(s, st.alive_mask, below_bits);
  const SharedValue below = sum_local(r, alive_below);
  const SharedValue above = sub_local(r, st.alive_count, below);

  // One comparison batch: which side holds rank k, and the termination tests
  // for either outcome. With a ceil-mean pivot an empty lower side means all
  // alive values are equal.
  SharedVector lhs(4), rhs(4);
  lhs.set(0, sub_local(r, st.target_rank, one));  // k <= below
  rhs.set(0, below);
  lhs.set(1, below);  // below == 0
  rhs.set(1, one);
  lhs.set(2, below);  // below side would be a singleton
  rhs.set(2, two);
  lhs.set(3, above);  // upper side would be a singleton
  rhs.set(3, two);
  const SharedVector tests = secure_cmp(s, lhs, rhs, 0);
  const SharedBit take_below{tests.at(0)};
  const SharedBit lower_empty{st.pivot_kind == PivotKind::kActiveMean ? tests.at(1) : zero};

  // One selection batch on the side bit, plus the upper-side done test.
  SharedVector sel = broadcast(take_below.v, n + 2);
  SharedVector if_below = alive_below;
  SharedVector if_above = sub_local(r, st.alive_mask, alive_below);
  if_below.push_back(below);
  if_above.push_back(above);
  if_below.push_back(st.target_rank);
  if_above.push_back(sub_local(r, st.target_rank, below));
  sel.push_back(lower_empty.v);
  if_below.push_back(one);
  if_above.push_back(tests.at(3));
  const SharedVector picked = secure_mux(s, sel, if_below, if_above, n);

  st.alive_mask = picked.slice(0, n);
  st.alive_count = picked.at(n);
  st.target_rank = picked.at(n + 1);
  st.done = {secure_mux(s, take_below, SharedBit{tests.at(2)}.v, picked.at(n + 2))};
  ++st.round_index;
  return st;
}

SharedValue avg_pivot(Session& s, const PivotState& st, const SharedVector& scores, const OmselConfig& cfg) {
  const SharedValue sum = sum_local(s.ring(), mul_beaver(s, st.alive_mask, scores));
  if (cfg.divide_by_constant_n) return secure_div_public(s, sum, st.n);
  return secure_div_shared(s, sum, st.alive_count);
}

OmselResult omsel(Session& s, const SharedVector& scores, const OmselConfig& cfg) {
  const std::size_t n = scores.size();
  if (n < 2 || n % 2 != 0) throw DomainError("omsel needs an even length >= 2, got " + std::to_string(n));
  StageScope scope(s.ledger(), stage::kOmsel);
  const unsigned budget = cfg.effective_max_rounds(n);

  PivotState st = omsel_initial_state(n);
  s.trace().set_round(1);
  const DealerSetup setup = dealer_setup(s.dealer(), 0, n);
  st.pivot = rdm_first_pivot(s, scores, setup.onehot);
  st.pivot_kind = PivotKind::kRandomElement;

  OmselResult result;
  while (true) {
    result.active_counts.push_back(static_cast<std::size_t>(s.open_at_dealer(st.alive_count).value));
    st = omsel_round(s, std::move(st), scores);
    result.rounds = st.round_index;
    if (open_bit(s, st.done)) break;
    if (st.round_index >= budget) {
      StageScope fallback(s.ledger(), stage::kOmselFallback);
      result.median = bitonic_median(s, scores);
      result.fell_back = true;
      return result;
    }
    s.trace().set_round(st.round_index + 1);
    st.pivot = avg_pivot(s, st, scores, cfg);
    st.pivot_kind = cfg.divide_by_constant_n ? PivotKind::kConstantN : PivotKind::kActiveMean;
  }
  result.median = extract_alive(s, st, scores);
  return result;
}

std::uint64_t bitonic_comparators(std::size_t n) {
  const std::uint64_t p = pow2_ceil(n);
  const std::uint64_t lg = log2_ceil(p);
  return p / 4 * lg * (lg + 1);
}

SharedValue bitonic_median(Session& s, const SharedVector& scores) {
  const std::size_t n = scores.size();
  if (n == 0) throw DomainError("median of an empty vector");
  const std::size_t p = pow2_ceil(n);
  SharedVector a = scores;
  for (std::size_t i = n; i < p; ++i) a.push_back(public_constant(s.ring().max_signed()));

  for (std::size_t k = 2; k <= p; k <<= 1) {
    for (std::size_t j = k >> 1; j > 0; j >>= 1) {
      std::vector<std::size_t> lo_idx, hi_idx;
      SharedVector first, second;
      for (std::size_t i = 0; i < p; ++i) {
        const std::size_t l = i ^ j;
        if (l <= i) continue;
        const bool ascending = (i & k) == 0;
        lo_idx.push_back(ascending ? i : l);
        hi_idx.push_back(ascending ? l : i);
        first.push_back(a.at(i));
        second.push_back(a.at(l));
      }
      // swap = [second < first]; lo = min, hi = max
      const SharedVector swap = secure_cmp(s, second, first);
      SharedVector both_sel, both_a, both_b;
      for (std::size_t t = 0; t < swap.size(); ++t) {
        both_sel.push_back(swap.at(t));
        both_a.push_back(second.at(t));
        both_b.push_back(first.at(t));
      }
      for (std::size_t t = 0; t < swap.size(); ++t) {
        both_sel.push_back(swap.at(t));
        both_a.push_back(first.at(t));
        both_b.push_back(second.at(t));
      }
      const SharedVector picked = secure_mux(s, both_sel, both_a, both_b);
      const std::size_t half = swap.size();
      for (std::size_t t = 0; t < half; ++t) {
        a.set(lo_idx[t], picked.at(t));
        a.set(hi_idx[t], picked.at(half + t));
      }
    }
  }
  return a.at(n / 2 - (n % 2 == 0 ? 1 : 0));
}

}  // namespace dropsim
