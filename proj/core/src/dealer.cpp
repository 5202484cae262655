#include "dropsim/dealer.hpp"

#include "dropsim/errors.hpp"

namespace dropsim {

BeaverTriple Dealer::make_triple() {
  const RingElement a = random_element();
  const RingElement b = random_element();
  BeaverTriple t;
  t.id = next_id_++;
  t.a = share(a);
  t.b = share(b);
  t.c = share(ring_.mul(a, b));
  return t;
}

SharedVector Dealer::onehot(std::size_t n, std::uint64_t r1, std::uint64_t r2) {
  if (n == 0) throw DomainError("one-hot vector needs n >= 1");
  const std::size_t index = static_cast<std::size_t>((r1 % n + r2 % n) % n);
  std::vector<RingElement> plain(n, RingElement{0});
  plain[index] = RingElement{1};
  return share(plain);
}

DealerSetup dealer_setup(Dealer& dealer, std::size_t count, std::size_t n) {
  const std::uint64_t r1 = dealer.rng()();
  const std::uint64_t r2 = dealer.rng()();
  return dealer_setup(dealer, count, n, r1, r2);
}

DealerSetup dealer_setup(Dealer& dealer, std::size_t count, std::size_t n, std::uint64_t r1, std::uint64_t r2) {
  if (n == 0) throw DomainError("dealer_setup needs n >= 1");
  DealerSetup out;
  out.triples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.triples.push_back(dealer.make_triple());
  out.onehot = dealer.onehot(n, r1, r2);
  return out;
}

}  // namespace dropsim
