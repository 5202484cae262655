#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dropsim/ring.hpp"
#include "dropsim/sharing.hpp"

namespace dropsim {

// Shares of (a, b, c) with c = a * b mod 2^ell. `id` is unique per dealer and
// lets the session reject reuse.
struct BeaverTriple {
  std::uint64_t id = 0;
  SharedValue a;
  SharedValue b;
  SharedValue c;
};

struct DealerSetup {
  std::vector<BeaverTriple> triples;
  SharedVector onehot;  // one-hot at (r1 + r2) mod n
};

// Trusted in-process dealer for offline correlated randomness. All randomness
// of a run flows from its seeded generator.
class Dealer {
 public:
  Dealer(const Ring& ring, std::uint64_t seed) : ring_(ring), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  RingElement random_element() { return ring_.reduce(rng_()); }

  SharedValue share(RingElement x) { return dropsim::share(ring_, x, rng_); }
  SharedVector share(const std::vector<RingElement>& xs) { return share_vector(ring_, xs, rng_); }
  // Fresh sharing of zero, used to rerandomize shares locally.
  SharedValue zero_share() { return share(RingElement{0}); }

  BeaverTriple make_triple();
  std::uint64_t triples_issued() const { return next_id_; }

  // Secret-shared one-hot vector selecting (r1 + r2) mod n. r1 and r2 stand
  // for the two parties' private contributions.
  SharedVector onehot(std::size_t n, std::uint64_t r1, std::uint64_t r2);

 private:
  const Ring& ring_;
  std::mt19937_64 rng_;
  std::uint64_t next_id_ = 0;
};

// Throws DomainError when n == 0. The overload without r1/r2 draws both.
DealerSetup dealer_setup(Dealer& dealer, std::size_t count, std::size_t n);
DealerSetup dealer_setup(Dealer& dealer, std::size_t count, std::size_t n, std::uint64_t r1, std::uint64_t r2);

}  // namespace dropsim
