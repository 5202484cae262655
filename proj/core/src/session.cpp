#include "dropsim/session.hpp"

#include "dropsim/errors.hpp"

namespace dropsim {

Session::Session(const SessionOptions& options)
    : ring_(options.ring),
      costs_(options.costs),
      dealer_(ring_, options.seed),
      debug_checks_(options.debug_checks) {
  costs_.validate();
}

void Session::consume(const BeaverTriple& t) {
  if (t.id >= used_triples_.size()) used_triples_.resize(t.id + 1, false);
  if (used_triples_[t.id]) throw ProtocolError("Beaver triple " + std::to_string(t.id) + " reused");
  used_triples_[t.id] = true;
}

SharedVector Session::share_fixed(const std::vector<double>& xs) {
  std::vector<RingElement> enc(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) enc[i] = ring_.encode(xs[i]);
  return share(enc);
}

}  // namespace dropsim
