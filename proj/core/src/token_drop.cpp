#include "dropsim/token_drop.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "dropsim/errors.hpp"

namespace dropsim {
namespace {

unsigned log2_ceil(std::size_t n) { return n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1)); }

std::size_t pairs_in_pass(std::size_t n, std::size_t pass) {
  const std::size_t start = pass % 2;
  return n > start ? (n - start) / 2 : 0;
}

// Bits of each offset, least significant first, by peeling off the top bit
// with one comparison per bit position.
std::vector<SharedVector> offset_bits(Session& s, SharedVector offsets, unsigned width) {
  const Ring& r = s.ring();
  const std::size_t n = offsets.size();
  const SharedValue one = public_constant(RingElement{1});
  std::vector<SharedVector> bits(width);
  for (unsigned t = width; t-- > 0;) {
    const RingElement weight{std::uint64_t{1} << t};
    const SharedVector small = secure_cmp(s, offsets, broadcast(public_constant(weight), n));
    SharedVector bit(n);
    for (std::size_t i = 0; i < n; ++i) {
      const SharedValue b = sub_local(r, one, small.at(i));
      bit.set(i, b);
      offsets.set(i, sub_local(r, offsets.at(i), scale_public(r, b, weight)));
    }
    bits[t] = std::move(bit);
  }
  return bits;
}

CompactionSchedule plan_log_shift(Session& s, const SharedVector& bits) {
  const Ring& r = s.ring();
  const std::size_t n = bits.size();
  const unsigned levels = log2_ceil(n);

  // Offset of element i = number of dropped elements before it.
  SharedVector offsets(n);
  SharedValue kept_before;
  for (std::size_t i = 0; i < n; ++i) {
    offsets.set(i, sub_local(r, public_constant(RingElement{i}), kept_before));
    kept_before = add_local(r, kept_before, bits.at(i));
  }
  std::vector<SharedVector> obits = offset_bits(s, offsets, levels);

  CompactionSchedule plan{CompactionNetwork::kLogShift, n, {}};
  SharedVector kept = bits;
  for (unsigned t = 0; t < levels; ++t) {
    const std::size_t shift = std::size_t{1} << t;
    const std::size_t span = n - shift;
    const SharedVector moving = mul_beaver(s, kept, obits[t]);
    SharedVector incoming = moving.slice(shift, span);

    // Remaining offset bits travel with their rows.
    if (t + 1 < levels) {
      SharedVector sel, from, to;
      for (unsigned u = t + 1; u < levels; ++u) {
        for (std::size_t p = 0; p < span; ++p) {
          sel.push_back(incoming.at(p));
          from.push_back(obits[u].at(p + shift));
          to.push_back(obits[u].at(p));
        }
      }
      const SharedVector moved = secure_mux(s, sel, from, to);
      std::size_t k = 0;
      for (unsigned u = t + 1; u < levels; ++u) {
        for (std::size_t p = 0; p < span; ++p) obits[u].set(p, moved.at(k++));
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      SharedValue next = sub_local(r, kept.at(p), moving.at(p));
      if (p < span) next = add_local(r, next, incoming.at(p));
      kept.set(p, next);
    }
    plan.selectors.push_back(std::move(incoming));
  }
  return plan;
}

CompactionSchedule plan_odd_even(Session& s, const SharedVector& bits) {
  const Ring& r = s.ring();
  const std::size_t n = bits.size();
  const SharedValue one = public_constant(RingElement{1});
  CompactionSchedule plan{CompactionNetwork::kOddEvenTransposition, n, {}};
  SharedVector b = bits;
  for (std::size_t pass = 0; pass < n; ++pass) {
    const std::size_t start = pass % 2;
    const std::size_t pairs = pairs_in_pass(n, pass);
    if (pairs == 0) {
      plan.selectors.emplace_back();
      continue;
    }
    SharedVector left_dropped(pairs), right_kept(pairs);
    for (std::size_t q = 0; q < pairs; ++q) {
      const std::size_t j = start + 2 * q;
      left_dropped.set(q, sub_local(r, one, b.at(j)));
      right_kept.set(q, b.at(j + 1));
    }
    // Swap exactly when a dropped row sits before a kept one.
    SharedVector swap = mul_beaver(s, left_dropped, right_kept);
    for (std::size_t q = 0; q < pairs; ++q) {
      const std::size_t j = start + 2 * q;
      b.set(j, add_local(r, b.at(j), swap.at(q)));
      b.set(j + 1, sub_local(r, b.at(j + 1), swap.at(q)));
    }
    plan.selectors.push_back(std::move(swap));
  }
  return plan;
}

}  // namespace

void TokenMatrix::validate() const {
  if (rows.size() != m * width) {
    throw ProtocolError("token matrix holds " + std::to_string(rows.size()) + " entries, expected " +
                        std::to_string(m * width));
  }
}

TokenMatrix share_tokens(Session& s, const std::vector<double>& values, std::size_t m, std::size_t width) {
  TokenMatrix t{m, width, s.share_fixed(values)};
  t.validate();
  return t;
}

void DropPlan::validate() const {
  if (num_layers == 0) throw DomainError("plan needs at least one layer");
  if (m0 < 2) throw DomainError("plan needs m0 >= 2");
  for (std::size_t i = 0; i < drop_layers.size(); ++i) {
    if (drop_layers[i] < 1 || drop_layers[i] > num_layers) {
      throw DomainError("drop layer " + std::to_string(drop_layers[i]) + " outside 1.." + std::to_string(num_layers));
    }
    if (i > 0 && drop_layers[i] <= drop_layers[i - 1]) throw DomainError("drop layers must be strictly increasing");
  }
  std::size_t m = m0;
  for (std::size_t i = 0; i < drop_layers.size(); ++i) {
    if (m % 2 != 0 || m < 2) {
      throw DomainError("m0=" + std::to_string(m0) + " cannot be halved at every drop layer");
    }
    m /= 2;
  }
}

bool DropPlan::is_drop_layer(unsigned layer) const {
  return std::find(drop_layers.begin(), drop_layers.end(), layer) != drop_layers.end();
}

std::size_t DropPlan::tokens_at(unsigned layer) const {
  std::size_t m = m0;
  for (unsigned l : drop_layers) {
    if (l < layer) m /= 2;
  }
  return m;
}

std::vector<std::size_t> DropPlan::schedule() const {
  std::vector<std::size_t> out{m0};
  for (std::size_t i = 0; i < drop_layers.size(); ++i) out.push_back(out.back() / 2);
  return out;
}

SharedVector keep_bits(Session& s, const ScoreVector& scores, const SharedValue& median) {
  return secure_cmp(s, broadcast(median, scores.size()), scores);
}

ScoreVector tie_break_scores(Session& s, const ScoreVector& scores) {
  const Ring& r = s.ring();
  const std::size_t n = scores.size();
  ScoreVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, add_public(r, scale_public(r, scores.at(i), RingElement{n}), RingElement{n - 1 - i}));
  }
  return out;
}

const char* compaction_network_name(CompactionNetwork n) {
  return n == CompactionNetwork::kLogShift ? "logshift" : "oddeven";
}

CompactionSchedule plan_compaction(Session& s, const SharedVector& bits, CompactionNetwork network) {
  const std::size_t n = bits.size();
  if (n < 2 || n % 2 != 0) throw DomainError("compaction needs an even length >= 2");
  if (s.debug_checks()) {
    std::uint64_t kept = 0;
    for (RingElement b : s.open_at_dealer(bits)) kept += b.value;
    if (kept != n / 2) {
      throw DiagnosticError("keep count " + std::to_string(kept) + " != " + std::to_string(n / 2));
    }
  }
  return network == CompactionNetwork::kLogShift ? plan_log_shift(s, bits) : plan_odd_even(s, bits);
}

SharedVector apply_compaction(Session& s, const CompactionSchedule& plan, const SharedVector& rows,
                              std::size_t width) {
  const std::size_t n = plan.n;
  if (rows.size() != n * width) throw ProtocolError("payload does not match the compaction length");
  SharedVector cur = rows;
  if (width == 0) return cur;

  if (plan.network == CompactionNetwork::kLogShift) {
    for (std::size_t t = 0; t < plan.selectors.size(); ++t) {
      const std::size_t shift = std::size_t{1} << t;
      const std::size_t span = n - shift;
      SharedVector sel(span * width), from(span * width), to(span * width);
      for (std::size_t p = 0; p < span; ++p) {
        const SharedValue c = plan.selectors[t].at(p);
        for (std::size_t w = 0; w < width; ++w) {
          sel.set(p * width + w, c);
          from.set(p * width + w, cur.at((p + shift) * width + w));
          to.set(p * width + w, cur.at(p * width + w));
        }
      }
      const SharedVector moved = secure_mux(s, sel, from, to);
      for (std::size_t k = 0; k < span * width; ++k) cur.set(k, moved.at(k));
    }
  } else {
    for (std::size_t pass = 0; pass < plan.selectors.size(); ++pass) {
      const std::size_t pairs = plan.selectors[pass].size();
      if (pairs == 0) continue;
      const std::size_t start = pass % 2;
      const std::size_t half = pairs * width;
      SharedVector sel(2 * half), a(2 * half), b(2 * half);
      for (std::size_t q = 0; q < pairs; ++q) {
        const std::size_t j = start + 2 * q;
        const SharedValue c = plan.selectors[pass].at(q);
        for (std::size_t w = 0; w < width; ++w) {
          const SharedValue left = cur.at(j * width + w);
          const SharedValue right = cur.at((j + 1) * width + w);
          sel.set(q * width + w, c);
          a.set(q * width + w, right);
          b.set(q * width + w, left);
          sel.set(half + q * width + w, c);
          a.set(half + q * width + w, left);
          b.set(half + q * width + w, right);
        }
      }
      const SharedVector out = secure_mux(s, sel, a, b);
      for (std::size_t q = 0; q < pairs; ++q) {
        const std::size_t j = start + 2 * q;
        for (std::size_t w = 0; w < width; ++w) {
          cur.set(j * width + w, out.at(q * width + w));
          cur.set((j + 1) * width + w, out.at(half + q * width + w));
        }
      }
    }
  }
  return cur.slice(0, n / 2 * width);
}

TokenMatrix oblivious_compact(Session& s, const TokenMatrix& tokens, const SharedVector& bits,
                              CompactionNetwork network) {
  tokens.validate();
  if (bits.size() != tokens.m) throw ProtocolError("keep bits and tokens differ in length");
  StageScope scope(s.ledger(), stage::kDropOverhead);
  const CompactionSchedule plan = plan_compaction(s, bits, network);
  return {tokens.m / 2, tokens.width, apply_compaction(s, plan, tokens.rows, tokens.width)};
}

CostCounts compaction_plan_cost(std::size_t n, CompactionNetwork network, const CostTable& table, unsigned ell) {
  CostCounts c;
  if (network == CompactionNetwork::kLogShift) {
    const unsigned levels = log2_ceil(n);
    for (unsigned t = 0; t < levels; ++t) c += table.cmp_charge(n, ell);
    for (unsigned t = 0; t < levels; ++t) {
      const std::size_t span = n - (std::size_t{1} << t);
      c += table.mul_charge(n, ell);
      if (t + 1 < levels) c += table.mux_charge(span * (levels - t - 1), ell);
    }
  } else {
    for (std::size_t pass = 0; pass < n; ++pass) {
      const std::size_t pairs = pairs_in_pass(n, pass);
      if (pairs > 0) c += table.mul_charge(pairs, ell);
    }
  }
  return c;
}

CostCounts compaction_apply_cost(std::size_t n, std::size_t width, CompactionNetwork network,
                                 const CostTable& table, unsigned ell) {
  CostCounts c;
  if (width == 0) return c;
  if (network == CompactionNetwork::kLogShift) {
    for (unsigned t = 0; t < log2_ceil(n); ++t) c += table.mux_charge((n - (std::size_t{1} << t)) * width, ell);
  } else {
    for (std::size_t pass = 0; pass < n; ++pass) {
      const std::size_t pairs = pairs_in_pass(n, pass);
      if (pairs > 0) c += table.mux_charge(2 * pairs * width, ell);
    }
  }
  return c;
}

DropSiteResult drop_site(Session& s, const AttentionMatrix& a, const TokenMatrix& v_input,
                         const TokenMatrix& residual, const DropPlan& plan, unsigned layer,
                         const DropSiteConfig& cfg) {
  DropSiteResult out{a, v_input, residual, {}, {}, false};
  if (!plan.is_drop_layer(layer)) return out;

  a.validate();
  v_input.validate();
  residual.validate();
  const std::size_t m = a.m;
  const std::size_t h = a.heads;
  if (v_input.m != m || residual.m != m) throw ProtocolError("drop site inputs disagree on token count");
  if (m % 2 != 0) throw DomainError("drop site needs an even token count");

  const ScoreVector scores = tie_break_scores(s, aggregate_scores(s, a, cfg.mcn));
  out.selection = omsel(s, scores, cfg.omsel);

  StageScope scope(s.ledger(), stage::kDropOverhead);
  out.keep = keep_bits(s, scores, out.selection.median);
  const CompactionSchedule sched = plan_compaction(s, out.keep, cfg.network);

  // Pass 1: token rows of A (all heads), V input and residual together.
  const std::size_t dv = v_input.width;
  const std::size_t dr = residual.width;
  const std::size_t w1 = h * m + dv + dr;
  SharedVector rows(m * w1);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t k = i * w1;
    for (std::size_t hh = 0; hh < h; ++hh) {
      for (std::size_t j = 0; j < m; ++j) rows.set(k++, a.entries.at(a.index(hh, i, j)));
    }
    for (std::size_t w = 0; w < dv; ++w) rows.set(k++, v_input.rows.at(i * dv + w));
    for (std::size_t w = 0; w < dr; ++w) rows.set(k++, residual.rows.at(i * dr + w));
  }
  const SharedVector kept_rows = apply_compaction(s, sched, rows, w1);

  const std::size_t half = m / 2;
  out.v_input = {half, dv, SharedVector(half * dv)};
  out.residual = {half, dr, SharedVector(half * dr)};
  // Pass 2: columns of the row-reduced A, one payload row per token.
  const std::size_t w2 = h * half;
  SharedVector cols(m * w2);
  for (std::size_t i = 0; i < half; ++i) {
    std::size_t k = i * w1;
    for (std::size_t hh = 0; hh < h; ++hh) {
      for (std::size_t j = 0; j < m; ++j) cols.set(j * w2 + hh * half + i, kept_rows.at(k++));
    }
    for (std::size_t w = 0; w < dv; ++w) out.v_input.rows.set(i * dv + w, kept_rows.at(k++));
    for (std::size_t w = 0; w < dr; ++w) out.residual.rows.set(i * dr + w, kept_rows.at(k++));
  }
  const SharedVector kept_cols = apply_compaction(s, sched, cols, w2);

  out.attention = {half, h, SharedVector(h * half * half)};
  for (std::size_t j = 0; j < half; ++j) {
    for (std::size_t hh = 0; hh < h; ++hh) {
      for (std::size_t i = 0; i < half; ++i) {
        out.attention.entries.set(out.attention.index(hh, i, j), kept_cols.at(j * w2 + hh * half + i));
      }
    }
  }
  out.dropped = true;
  return out;
}

}  // namespace dropsim
