#pragma once

#include <cstddef>
#include <cstdint>

#include "dropsim/session.hpp"
#include "dropsim/sharing.hpp"

namespace dropsim {

inline constexpr std::size_t kTraceAll = static_cast<std::size_t>(-1);

// Every primitive charges the session ledger once per element. A vector call
// is one logical batch: element counts add up, rounds are charged once.

/// Ring product x*y via a Beaver triple. Throws ProtocolError on triple reuse.
SharedValue mul_beaver(Session& s, const SharedValue& x, const SharedValue& y, const BeaverTriple& t);
/// Ring product with a fresh dealer triple.
SharedValue mul_beaver(Session& s, const SharedValue& x, const SharedValue& y);
SharedVector mul_beaver(Session& s, const SharedVector& x, const SharedVector& y);

/// Drops f fractional bits with round-to-nearest (dealer ideal functionality).
SharedValue truncate(Session& s, const SharedValue& x);
SharedVector truncate(Session& s, const SharedVector& x);

/// Fixed-point product: mul_beaver followed by truncate.
SharedValue mul_fixed(Session& s, const SharedValue& x, const SharedValue& y);
SharedVector mul_fixed(Session& s, const SharedVector& x, const SharedVector& y);

/// [signed(x) < signed(y)]; equality gives 0.
SharedBit secure_cmp(Session& s, const SharedValue& x, const SharedValue& y);
/// Element-wise comparison, returned as a vector of shared bits. Elements at
/// positions >= `traced` are bookkeeping and appear in the trace with index -1.
SharedVector secure_cmp(Session& s, const SharedVector& x, const SharedVector& y,
                        std::size_t traced = kTraceAll);

/// c ? a : b, computed as b + c*(a - b). Non-bit selectors throw
/// ProtocolError when debug checks are on.
SharedValue secure_mux(Session& s, const SharedBit& c, const SharedValue& a, const SharedValue& b);
SharedVector secure_mux(Session& s, const SharedVector& c, const SharedVector& a, const SharedVector& b,
                        std::size_t traced = kTraceAll);
SharedVector secure_mux(Session& s, const SharedBit& c, const SharedVector& a, const SharedVector& b);

/// Fixed-point 1/x. Throws DomainError when x <= 0.
SharedValue secure_recip(Session& s, const SharedValue& x);
SharedVector secure_recip(Session& s, const SharedVector& x);

/// x / n for public n >= 1, computed locally on rerandomized shares. The
/// result is off by less than one quantum except with probability about
/// |x| / 2^ell. Throws DomainError when n == 0.
SharedValue secure_div_public(Session& s, const SharedValue& x, std::uint64_t n);

/// ceil(num / den) on signed ring integers, den secret (dealer ideal
/// functionality). Throws ProtocolError when den <= 0.
SharedValue secure_div_shared(Session& s, const SharedValue& num, const SharedValue& den);

/// Reveals a shared bit to both parties.
bool open_bit(Session& s, const SharedBit& b);

SharedVector broadcast(const SharedValue& v, std::size_t n);

}  // namespace dropsim
