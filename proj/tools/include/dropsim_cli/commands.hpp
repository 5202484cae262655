#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dropsim_cli/config.hpp"

namespace dropsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitIoOrConfig = 2;

// Each command validates a copy of the config, creates the output directory
// and writes its reports there. Progress and errors go to `log`.

/// omsel_bench.csv / .json: bitonic and OMSel cost statistics per N.
int cmd_omsel_bench(const RunConfig& cfg, std::ostream& log);
/// pipeline_stages.csv, pipeline_summary.csv, pipeline.json.
int cmd_pipeline(const RunConfig& cfg, std::ostream& log);
/// trace.jsonl and trace_check.json; exit 1 when verification fails.
int cmd_trace(const RunConfig& cfg, std::ostream& log);
/// toytask.csv, toytask_compare.csv, toytask.json.
int cmd_toytask(const RunConfig& cfg, std::ostream& log);

const std::vector<std::string>& command_names();
/// Dispatches by name; unknown names return kExitIoOrConfig.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace dropsim::cli
