#pragma once

#include <cstddef>
#include <vector>

#include "dropsim/primitives.hpp"
#include "dropsim/session.hpp"

namespace dropsim {

// Shared pre-Softmax attention logits, row-major per head: entry (h, i, j) at
// (h * m + i) * m + j. Logits are expected to carry the 1/sqrt(d/H) scale
// already.
struct AttentionMatrix {
  std::size_t m = 0;
  std::size_t heads = 0;
  SharedVector entries;

  std::size_t index(std::size_t h, std::size_t i, std::size_t j) const { return (h * m + i) * m + j; }
  // Throws ProtocolError unless m >= 2, heads >= 1 and sizes agree.
  void validate() const;
};

AttentionMatrix share_attention(Session& s, const std::vector<double>& logits, std::size_t m, std::size_t heads);

// One score per token, shared.
using ScoreVector = SharedVector;

struct McnConfig {
  unsigned exponent = 2;  // n in (x - max) / max^n
  double offset = 4.0;    // public shift so that row maxima are positive

  void validate() const;
};

/// Maximum via a tournament: len-1 Cmp and len-1 Mux, charged to the softmax
/// stage. Throws DomainError on an empty row.
SharedValue secure_row_max(Session& s, const SharedVector& row);

/// Maxima of consecutive rows of length `row_len`, one tournament level per
/// batch.
SharedVector secure_rows_max(Session& s, const SharedVector& rows, std::size_t row_len);

/// (x_j - max) / max^n for one row. Throws DomainError when max <= 0.
SharedVector mcn_row(Session& s, const SharedVector& row, const SharedValue& max, unsigned n_exp);

/// Batched form of mcn_row over consecutive rows with per-row maxima.
SharedVector mcn_rows(Session& s, const SharedVector& rows, std::size_t row_len, const SharedVector& maxes,
                      unsigned n_exp);

/// score_j = sum over heads and rows of MCN(A + offset)_{ij}.
ScoreVector aggregate_scores(Session& s, const AttentionMatrix& a, const McnConfig& cfg);

}  // namespace dropsim
