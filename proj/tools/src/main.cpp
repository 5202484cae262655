#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dropsim_cli/commands.hpp"
#include "dropsim_cli/config.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::string> seed, out, profile, n, trials, scheme, workers;
  bool trace = false;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file");
  cmd->add_option("--seed", f.seed, "base seed (u64)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--profile", f.profile, "lan, wan, mobile, custom or all");
  cmd->add_option("--n", f.n, "comma-separated sizes");
  cmd->add_option("--trials", f.trials, "trials per size");
  cmd->add_option("--scheme", f.scheme, "baseline, post, pre or all");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_flag("--trace", f.trace, "also dump obliviousness traces");
  cmd->add_option("--set", f.set, "override any config key: --set key=value")->take_all();
}

dropsim::cli::Overrides flag_overrides(const CommonFlags& f) {
  dropsim::cli::Overrides kv;
  auto put = [&kv](const char* key, const std::optional<std::string>& v) {
    if (v) kv.emplace_back(key, *v);
  };
  put("seed", f.seed);
  put("out", f.out);
  put("profile", f.profile);
  put("n", f.n);
  put("trials", f.trials);
  put("scheme", f.scheme);
  put("workers", f.workers);
  if (f.trace) kv.emplace_back("trace", "true");
  for (const auto& s : f.set) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw dropsim::cli::ConfigError("--set expects key=value, got '" + s + "'");
    kv.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dropsim: two-party token drop simulator and cost benchmarks"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::vector<CLI::App*> subs{
      app.add_subcommand("omsel-bench", "OMSel vs bitonic median cost statistics"),
      app.add_subcommand("pipeline", "modeled per-layer cost of baseline, post-drop and pre-drop"),
      app.add_subcommand("trace", "dump and verify the access trace of one OMSel run"),
      app.add_subcommand("toytask", "signal retention of MCN and Softmax scoring on a planted task"),
  };
  for (auto* s : subs) add_common(s, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dropsim::cli::kExitIoOrConfig;
  }

  std::string name;
  for (auto* s : subs) {
    if (s->parsed()) name = s->get_name();
  }
  dropsim::cli::RunConfig cfg;
  try {
    if (!flags.config.empty()) dropsim::cli::apply_overrides(cfg, dropsim::cli::read_config_file(flags.config));
    dropsim::cli::apply_overrides(cfg, flag_overrides(flags));
    dropsim::cli::validate(cfg);
  } catch (const dropsim::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dropsim::cli::kExitIoOrConfig;
  }
  return dropsim::cli::run_command(name, cfg, std::cerr);
}
