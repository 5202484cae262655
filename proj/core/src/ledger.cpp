#include "dropsim/ledger.hpp"

#include <bit>

#include "dropsim/errors.hpp"

namespace dropsim {

CostCounts& CostCounts::operator+=(const CostCounts& o) {
  cmp += o.cmp;
  mux += o.mux;
  mul += o.mul;
  recip += o.recip;
  trunc += o.trunc;
  open += o.open;
  rounds += o.rounds;
  bytes += o.bytes;
  return *this;
}

std::uint64_t CostTable::cmp_bytes(unsigned ell) const {
  return static_cast<std::uint64_t>(ell * cmp_lambda_factor);
}

unsigned CostTable::effective_cmp_rounds(unsigned ell) const {
  if (cmp_rounds != 0) return cmp_rounds;
  return static_cast<unsigned>(std::bit_width(ell - 1));  // ceil(log2 ell)
}

CostCounts CostTable::cmp_charge(std::uint64_t n, unsigned ell) const {
  CostCounts c;
  c.cmp = n;
  c.rounds = effective_cmp_rounds(ell);
  c.bytes = n * cmp_bytes(ell);
  return c;
}

CostCounts CostTable::mux_charge(std::uint64_t n, unsigned ell) const {
  CostCounts c;
  c.mux = n;
  c.rounds = mux_rounds;
  c.bytes = n * mux_bytes(ell);
  return c;
}

CostCounts CostTable::mul_charge(std::uint64_t n, unsigned ell) const {
  CostCounts c;
  c.mul = n;
  c.rounds = mul_rounds;
  c.bytes = n * mul_bytes(ell);
  return c;
}

CostCounts CostTable::trunc_charge(std::uint64_t n, unsigned ell) const {
  CostCounts c;
  c.trunc = n;
  c.rounds = trunc_rounds;
  c.bytes = n * trunc_bytes(ell);
  return c;
}

CostCounts CostTable::recip_charge(std::uint64_t n, unsigned ell) const {
  CostCounts c;
  c.recip = n;
  c.mul = n * recip_muls;
  c.rounds = recip_rounds;
  c.bytes = c.mul * mul_bytes(ell);
  return c;
}

CostCounts CostTable::open_charge(std::uint64_t n, unsigned ell) const {
  CostCounts c;
  c.open = n;
  c.rounds = open_rounds;
  c.bytes = n * open_bytes(ell);
  return c;
}

void CostTable::validate() const {
  if (!(cmp_lambda_factor > 0)) throw DomainError("cmp_lambda_factor must be positive");
  if (mux_rounds == 0 || mul_rounds == 0 || open_rounds == 0) {
    throw DomainError("interactive primitives need at least one round");
  }
}

void CostLedger::charge(const CostCounts& c) {
  total_ += c;
  by_stage_[stage_tag_] += c;
}

CostCounts CostLedger::stage(const std::string& tag) const {
  auto it = by_stage_.find(tag);
  return it == by_stage_.end() ? CostCounts{} : it->second;
}

void CostLedger::reset() {
  total_ = {};
  by_stage_.clear();
}

StageScope::StageScope(CostLedger& ledger, std::string tag) : ledger_(ledger), saved_(ledger.stage_tag()) {
  ledger_.set_stage_tag(std::move(tag));
}

StageScope::~StageScope() { ledger_.set_stage_tag(saved_); }

}  // namespace dropsim
