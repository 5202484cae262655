#pragma once

#include <cstdint>
#include <vector>

#include "dropsim/dealer.hpp"
#include "dropsim/ledger.hpp"
#include "dropsim/ring.hpp"
#include "dropsim/trace.hpp"

namespace dropsim {

struct SessionOptions {
  RingParams ring;
  CostTable costs;
  std::uint64_t seed = 1;
  bool debug_checks = true;  // dealer-side sanity checks on selector bits etc.
};

// One protocol instance: ring, dealer, ledger and trace recorder. Both
// parties run in lockstep inside it. Not copyable; instances share nothing.
class Session {
 public:
  explicit Session(const SessionOptions& options);
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const Ring& ring() const { return ring_; }
  const CostTable& costs() const { return costs_; }
  Dealer& dealer() { return dealer_; }
  CostLedger& ledger() { return ledger_; }
  const CostLedger& ledger() const { return ledger_; }
  TraceRecorder& trace() { return trace_; }
  bool debug_checks() const { return debug_checks_; }

  // Marks a triple as spent; throws ProtocolError on reuse.
  void consume(const BeaverTriple& t);

  // Dealer-side view used by ideal functionalities and test instrumentation.
  RingElement open_at_dealer(const SharedValue& v) const { return reconstruct(ring_, v); }
  std::vector<RingElement> open_at_dealer(const SharedVector& v) const { return reconstruct(ring_, v); }

  SharedValue share(RingElement x) { return dealer_.share(x); }
  SharedVector share(const std::vector<RingElement>& xs) { return dealer_.share(xs); }
  SharedVector share_fixed(const std::vector<double>& xs);

 private:
  Ring ring_;
  CostTable costs_;
  Dealer dealer_;
  CostLedger ledger_;
  TraceRecorder trace_;
  bool debug_checks_;
  std::vector<bool> used_triples_;
};

}  // namespace dropsim
