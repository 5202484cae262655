#include "dropsim/mcn.hpp"

#include <string>

#include "dropsim/errors.hpp"

namespace dropsim {

void AttentionMatrix::validate() const {
  if (m < 2) throw ProtocolError("attention matrix needs m >= 2");
  if (heads < 1) throw ProtocolError("attention matrix needs at least one head");
  if (entries.size() != heads * m * m) {
    throw ProtocolError("attention matrix holds " + std::to_string(entries.size()) + " entries, expected " +
                        std::to_string(heads * m * m));
  }
}

AttentionMatrix share_attention(Session& s, const std::vector<double>& logits, std::size_t m, std::size_t heads) {
  AttentionMatrix a{m, heads, s.share_fixed(logits)};
  a.validate();
  return a;
}

void McnConfig::validate() const {
  if (exponent < 1) throw DomainError("MCN exponent must be >= 1");
  if (!(offset >= 0)) throw DomainError("MCN offset must be non-negative");
}

SharedValue secure_row_max(Session& s, const SharedVector& row) {
  if (row.empty()) throw DomainError("max of an empty row");
  return secure_rows_max(s, row, row.size()).at(0);
}

SharedVector secure_rows_max(Session& s, const SharedVector& rows, std::size_t row_len) {
  if (row_len == 0 || rows.size() % row_len != 0) throw DomainError("rows do not split into rows of that length");
  StageScope scope(s.ledger(), stage::kSoftmax);
  const std::size_t row_count = rows.size() / row_len;
  std::vector<SharedVector> live(row_count);
  for (std::size_t r = 0; r < row_count; ++r) live[r] = rows.slice(r * row_len, row_len);

  for (std::size_t len = row_len; len > 1; len = (len + 1) / 2) {
    SharedVector left, right;
    for (const auto& row : live) {
      for (std::size_t j = 0; j + 1 < len; j += 2) {
        left.push_back(row.at(j));
        right.push_back(row.at(j + 1));
      }
    }
    const SharedVector lt = secure_cmp(s, left, right);
    const SharedVector winners = secure_mux(s, lt, right, left);
    std::size_t k = 0;
    for (auto& row : live) {
      SharedVector next;
      for (std::size_t j = 0; j + 1 < len; j += 2) next.push_back(winners.at(k++));
      if (len % 2 == 1) next.push_back(row.at(len - 1));
      row = std::move(next);
    }
  }
  SharedVector out(row_count);
  for (std::size_t r = 0; r < row_count; ++r) out.set(r, live[r].at(0));
  return out;
}

SharedVector mcn_row(Session& s, const SharedVector& row, const SharedValue& max, unsigned n_exp) {
  SharedVector maxes(1);
  maxes.set(0, max);
  return mcn_rows(s, row, row.size(), maxes, n_exp);
}

SharedVector mcn_rows(Session& s, const SharedVector& rows, std::size_t row_len, const SharedVector& maxes,
                      unsigned n_exp) {
  if (n_exp < 1) throw DomainError("MCN exponent must be >= 1");
  if (row_len == 0 || rows.size() != row_len * maxes.size()) throw ProtocolError("rows and maxima disagree");
  const Ring& r = s.ring();
  const SharedVector recips = secure_recip(s, maxes);
  SharedVector spread(rows.size());
  SharedVector diff(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t row = i / row_len;
    spread.set(i, recips.at(row));
    diff.set(i, sub_local(r, rows.at(i), maxes.at(row)));
  }
  for (unsigned k = 0; k < n_exp; ++k) diff = mul_fixed(s, diff, spread);
  return diff;
}

ScoreVector aggregate_scores(Session& s, const AttentionMatrix& a, const McnConfig& cfg) {
  a.validate();
  cfg.validate();
  const Ring& r = s.ring();
  const RingElement offset = r.encode(cfg.offset);
  SharedVector shifted = a.entries;
  for (auto& v : shifted.party(Party::kP0)) v = r.add(v, offset);

  const SharedVector maxes = secure_rows_max(s, shifted, a.m);
  StageScope scope(s.ledger(), stage::kMcn);
  const SharedVector mcn = mcn_rows(s, shifted, a.m, maxes, cfg.exponent);

  ScoreVector scores(a.m);
  for (Party p : {Party::kP0, Party::kP1}) {
    const auto& src = mcn.party(p);
    auto& dst = scores.party(p);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i % a.m] = r.add(dst[i % a.m], src[i]);
  }
  return scores;
}

}  // namespace dropsim
