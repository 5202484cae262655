#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dropsim_cli/commands.hpp"
#include "dropsim_cli/config.hpp"
#include "dropsim_cli/report.hpp"

namespace dropsim::cli {
namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("dropsim_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CsvTest, Rfc4180Quoting) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("128,64"), "\"128,64\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  CsvTable t({"a", "b"});
  t.add_row({"1", "x,y"});
  EXPECT_EQ(t.str(), "a,b\r\n1,\"x,y\"\r\n");
  EXPECT_THROW(t.add_row({"1"}), std::logic_error);
}

TEST(ConfigTest, ParsesAndApplies) {
  const Overrides kv = parse_config_text("# comment\nseed = 9\nn = 8, 16\nprofile = wan  # net\ntoy_outliers=false\n");
  RunConfig c;
  apply_overrides(c, kv);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.n_list, (std::vector<std::size_t>{8, 16}));
  EXPECT_EQ(c.profile, "wan");
  EXPECT_FALSE(c.toy.outliers);
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.profiles().size(), 1u);
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_THROW(parse_config_text("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("seed 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("seed = 1\nseed = 2\n"), ConfigError);
  RunConfig c;
  EXPECT_THROW(apply_overrides(c, {{"seed", "-1"}}), ConfigError);
  EXPECT_THROW(apply_overrides(c, {{"scheme", "most"}}), ConfigError);
  c = {};
  c.n_list = {7};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.profile = "satellite";
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.profile = "custom";
  EXPECT_THROW(validate(c), ConfigError);
  c.bandwidth_bps = 1e9;
  c.latency_s = 0.01;
  EXPECT_NO_THROW(validate(c));
  c = {};
  c.plan.drop_layers = {1, 1};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.calibration_path = "/nonexistent/calibration.txt";
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(CommandTest, InvalidConfigWritesNothing) {
  RunConfig c;
  c.out_dir = temp_dir("invalid");
  c.trials = 0;
  std::ostringstream log;
  EXPECT_EQ(run_command("omsel-bench", c, log), kExitIoOrConfig);
  EXPECT_FALSE(std::filesystem::exists(c.out_dir));
  EXPECT_EQ(run_command("nope", RunConfig{}, log), kExitIoOrConfig);
}

TEST(CommandTest, OmselBenchBitonicRow) {
  RunConfig c;
  c.out_dir = temp_dir("bench");
  c.n_list = {64};
  c.trials = 3;
  std::ostringstream log;
  ASSERT_EQ(cmd_omsel_bench(c, log), kExitOk) << log.str();
  const std::string csv = slurp(c.out_dir / "omsel_bench.csv");
  EXPECT_NE(csv.find("\r\nbitonic,64,3,672,672,672,1344,1344,1344,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\r\nomsel,64,3,"), std::string::npos);
}

TEST(CommandTest, PipelineScheduleAndZeroDrop) {
  RunConfig c;
  c.out_dir = temp_dir("pipeline");
  c.profile = "lan";
  std::ostringstream log;
  ASSERT_EQ(cmd_pipeline(c, log), kExitOk) << log.str();
  const std::string summary = slurp(c.out_dir / "pipeline_summary.csv");
  EXPECT_NE(summary.find("pre_drop,lan,128,\"128,64,32,16\","), std::string::npos) << summary;

  c.plan.drop_layers = {};
  c.out_dir = temp_dir("pipeline_zero");
  ASSERT_EQ(cmd_pipeline(c, log), kExitOk);
  const std::string zero = slurp(c.out_dir / "pipeline_summary.csv");
  std::istringstream rows(zero);
  std::string line;
  std::getline(rows, line);
  int checked = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line.substr(0, line.size() - 1));
    std::string item;
    while (std::getline(ls, item, ',')) f.push_back(item);
    ASSERT_EQ(f[5], "1") << line;
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST(CommandTest, TraceN8) {
  RunConfig c;
  c.out_dir = temp_dir("trace");
  c.n_list = {8};
  std::ostringstream log;
  ASSERT_EQ(cmd_trace(c, log), kExitOk) << log.str();
  const std::string check = slurp(c.out_dir / "trace_check.json");
  EXPECT_NE(check.find("\"coverage_ok\": true"), std::string::npos);
  EXPECT_NE(check.find("\"traces_equal\": true"), std::string::npos);
}

TEST(CommandTest, ToytaskNoSignalIsNA) {
  RunConfig c;
  c.out_dir = temp_dir("toy");
  c.toy.signal = 0;
  c.toy.tokens = 32;
  c.toy_drops = {1};
  c.toy_runs = 3;
  std::ostringstream log;
  ASSERT_EQ(cmd_toytask(c, log), kExitOk) << log.str();
  const std::string csv = slurp(c.out_dir / "toytask.csv");
  EXPECT_NE(csv.find("mcn,true,1,\"32,16\",3,N/A,"), std::string::npos) << csv;
}

TEST(CommandTest, WorkersDoNotChangeOutput) {
  RunConfig c;
  c.n_list = {16};
  c.trials = 8;
  std::ostringstream log;
  c.out_dir = temp_dir("w1");
  ASSERT_EQ(cmd_omsel_bench(c, log), kExitOk);
  const std::string serial = slurp(c.out_dir / "omsel_bench.csv");
  c.workers = 3;
  c.out_dir = temp_dir("w3");
  ASSERT_EQ(cmd_omsel_bench(c, log), kExitOk);
  EXPECT_EQ(serial, slurp(c.out_dir / "omsel_bench.csv"));
}

}  // namespace
}  // namespace dropsim::cli
