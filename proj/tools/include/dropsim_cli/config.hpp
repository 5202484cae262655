#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dropsim/cost_model.hpp"
#include "dropsim/mcn.hpp"
#include "dropsim/omsel.hpp"
#include "dropsim/pipeline.hpp"
#include "dropsim/ring.hpp"
#include "dropsim/token_drop.hpp"
#include "dropsim/toy_task.hpp"

namespace dropsim::cli {

// Bad configuration or unusable paths; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchemeSelection : std::uint8_t { kBaseline, kPost, kPre, kAll };
enum class Workload : std::uint8_t { kMcn, kUniform };

struct RunConfig {
  std::uint64_t seed = 1;
  RingParams ring;
  McnConfig mcn;
  OmselConfig omsel;
  CompactionNetwork network = CompactionNetwork::kLogShift;

  DropPlan plan;
  std::vector<std::size_t> m0_list{128};

  // "lan", "wan", "mobile", "custom" or "all".
  std::string profile = "all";
  double bandwidth_bps = 0;  // custom profile only
  double latency_s = 0;
  std::optional<std::filesystem::path> calibration_path;
  Calibration calibration = Calibration::defaults();  // loaded during validation

  std::filesystem::path out_dir = "out";
  std::vector<std::size_t> n_list{64, 128, 256};
  std::uint32_t trials = 100;
  Workload workload = Workload::kMcn;
  SchemeSelection scheme = SchemeSelection::kAll;
  bool trace = false;
  unsigned workers = 1;

  ToyTaskConfig toy;
  std::vector<unsigned> toy_drops{1, 3};
  std::uint32_t toy_runs = 100;

  // Profiles the config selects, in report order.
  std::vector<NetProfile> profiles() const;
  std::vector<Scheme> schemes() const;
};

// Ordered key = value pairs; later assignments win.
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses a config file body. Unknown keys, malformed lines and duplicate
/// keys throw ConfigError naming the line.
Overrides parse_config_text(const std::string& text);
Overrides read_config_file(const std::filesystem::path& path);

/// Applies assignments in order; unknown keys or bad values throw ConfigError.
void apply_overrides(RunConfig& cfg, const Overrides& kv);

/// Checks every field and loads the calibration table. Runs before any
/// protocol work, so a bad config leaves no partial output.
void validate(RunConfig& cfg);

/// Canonical key = value dump of the effective configuration.
std::string describe(const RunConfig& cfg);

}  // namespace dropsim::cli
