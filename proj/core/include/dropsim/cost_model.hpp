#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dropsim/ledger.hpp"

namespace dropsim {

enum class Stage : std::uint8_t { kQkv, kQxK, kSoftmax, kXv, kLn2, kLayerNorm, kLn3, kGelu, kLn4 };

inline constexpr std::size_t kStageCount = 9;
inline constexpr std::array<Stage, kStageCount> kAllStages{Stage::kQkv, Stage::kQxK,   Stage::kSoftmax,
                                                           Stage::kXv,  Stage::kLn2,   Stage::kLayerNorm,
                                                           Stage::kLn3, Stage::kGelu,  Stage::kLn4};

const char* stage_name(Stage s);
std::optional<Stage> stage_from_name(const std::string& name);
// Token-count exponent of the stage's cost law (1 or 2).
int stage_exponent(Stage s);

struct NetProfile {
  std::string name;
  double bandwidth_bps = 0;  // bits per second
  double latency_s = 0;      // one-way, charged once per round

  void validate() const;
  static NetProfile lan() { return {"lan", 3e9, 0.8e-3}; }
  static NetProfile wan() { return {"wan", 200e6, 50e-3}; }
  static NetProfile mobile() { return {"mobile", 100e6, 80e-3}; }
  static std::optional<NetProfile> named(const std::string& name);
};

// Per-stage shares of one baseline layer at `reference_tokens`, measured
// under the `reference` profile, and the split of each stage's time into
// compute, latency and bandwidth components.
struct Calibration {
  double reference_tokens = 128;
  double reference_layer_seconds = 268.8;
  NetProfile reference = NetProfile::lan();
  std::array<double, kStageCount> share{};
  std::array<double, kStageCount> latency_fraction{};
  std::array<double, kStageCount> bandwidth_fraction{};
  std::array<double, kStageCount> plaintext_share{};  // narrative comparison only
  double softmax_exp_fraction = 0.82;  // exponential phase of Softmax
  double op_seconds = 2e-6;            // local compute per executed primitive element

  static Calibration defaults();
  // Shares sum to 1, fractions in [0, 1) with compute left over.
  void validate() const;
};

// Reads `key = value` lines (`#` comments) over the defaults. Keys:
// reference_tokens, reference_layer_seconds, softmax_exp_fraction,
// op_seconds, share.<Stage>, latency_fraction.<Stage>,
// bandwidth_fraction.<Stage>, plaintext_share.<Stage>. Throws DomainError
// with the offending line number.
Calibration load_calibration(std::istream& in);

struct StageCost {
  double compute_s = 0;  // local work, in seconds
  double rounds = 0;
  double bytes = 0;
};

double stage_time(const StageCost& c, const NetProfile& net);
// Ledger counts turned into seconds.
double ledger_time(const CostCounts& c, const NetProfile& net, double op_seconds);

class StageCostModel {
 public:
  explicit StageCostModel(Calibration cal = Calibration::defaults());

  const Calibration& calibration() const { return cal_; }
  StageCost cost(Stage s, double tokens) const;
  double time(Stage s, double tokens, const NetProfile& net) const { return stage_time(cost(s, tokens), net); }
  // Softmax split into the exponential phase and the normalization phase.
  std::pair<double, double> softmax_phases(double tokens, const NetProfile& net) const;

 private:
  Calibration cal_;
};

}  // namespace dropsim
