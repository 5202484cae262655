#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace dropsim {

// Tallies of protocol work. `recip` counts reciprocal and secret-division
// calls; `trunc` counts fixed-point truncations; `open` counts revealed values.
struct CostCounts {
  std::uint64_t cmp = 0;
  std::uint64_t mux = 0;
  std::uint64_t mul = 0;
  std::uint64_t recip = 0;
  std::uint64_t trunc = 0;
  std::uint64_t open = 0;
  std::uint64_t rounds = 0;
  std::uint64_t bytes = 0;

  CostCounts& operator+=(const CostCounts& o);
  friend CostCounts operator+(CostCounts a, const CostCounts& b) { return a += b; }
  friend bool operator==(const CostCounts&, const CostCounts&) = default;
};

// Per-primitive byte and round costs. Bytes are totals across both parties.
struct CostTable {
  unsigned cmp_rounds = 0;          // 0 selects ceil(log2 ell)
  double cmp_lambda_factor = 16.0;  // Cmp bytes = ell * factor
  unsigned mux_rounds = 1;
  unsigned mul_rounds = 1;
  unsigned recip_muls = 3;          // reciprocal/division charged as this many muls
  unsigned recip_rounds = 3;
  unsigned trunc_rounds = 0;        // truncation rides on the multiplication round
  unsigned open_rounds = 1;

  std::uint64_t cmp_bytes(unsigned ell) const;
  unsigned effective_cmp_rounds(unsigned ell) const;
  static std::uint64_t mux_bytes(unsigned ell) { return 2ULL * ell; }
  // Each party opens two masked elements: 2 * ell * 2 bits.
  static std::uint64_t mul_bytes(unsigned ell) { return 4ULL * ell / 8; }
  static std::uint64_t trunc_bytes(unsigned ell) { return 2ULL * ell / 8; }
  static std::uint64_t open_bytes(unsigned ell) { return 2ULL * ell / 8; }

  // Ledger charge of one batch of n calls.
  CostCounts cmp_charge(std::uint64_t n, unsigned ell) const;
  CostCounts mux_charge(std::uint64_t n, unsigned ell) const;
  CostCounts mul_charge(std::uint64_t n, unsigned ell) const;
  CostCounts trunc_charge(std::uint64_t n, unsigned ell) const;
  CostCounts recip_charge(std::uint64_t n, unsigned ell) const;
  CostCounts open_charge(std::uint64_t n, unsigned ell) const;

  // Throws DomainError on non-positive factors.
  void validate() const;
};

// Cost accumulator owned by one protocol instance. Charges go to the total and
// to the current stage tag.
class CostLedger {
 public:
  void charge(const CostCounts& c);

  const CostCounts& total() const { return total_; }
  const std::map<std::string, CostCounts>& by_stage() const { return by_stage_; }
  CostCounts stage(const std::string& tag) const;

  const std::string& stage_tag() const { return stage_tag_; }
  void set_stage_tag(std::string tag) { stage_tag_ = std::move(tag); }

  void reset();

 private:
  CostCounts total_;
  std::map<std::string, CostCounts> by_stage_;
  std::string stage_tag_ = "untagged";
};

// Switches the ledger's stage tag for the lifetime of the scope.
class StageScope {
 public:
  StageScope(CostLedger& ledger, std::string tag);
  ~StageScope();
  StageScope(const StageScope&) = delete;
  StageScope& operator=(const StageScope&) = delete;

 private:
  CostLedger& ledger_;
  std::string saved_;
};

namespace stage {
inline constexpr const char* kSoftmax = "softmax";
inline constexpr const char* kMcn = "mcn";
inline constexpr const char* kOmsel = "omsel";
inline constexpr const char* kOmselFallback = "omsel_fallback";
inline constexpr const char* kBitonic = "bitonic";
inline constexpr const char* kDropOverhead = "drop_overhead";
}  // namespace stage

}  // namespace dropsim
