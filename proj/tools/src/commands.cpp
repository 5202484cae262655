#include "dropsim_cli/commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "dropsim/omsel.hpp"
#include "dropsim/pipeline.hpp"
#include "dropsim/token_drop.hpp"
#include "dropsim/toy_task.hpp"
#include "dropsim/trace.hpp"
#include "dropsim/workload.hpp"
#include "dropsim_cli/report.hpp"

namespace dropsim::cli {
namespace {

using nlohmann::json;

// Runs fn(0..count-1) on up to `workers` threads. Results must be written by
// index so the merge order does not depend on scheduling.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

RunConfig prepare(const RunConfig& in) {
  RunConfig cfg = in;
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  return cfg;
}

SessionOptions session_options(const RunConfig& cfg, std::uint64_t seed) {
  SessionOptions o;
  o.ring = cfg.ring;
  o.seed = seed;
  return o;
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  std::istringstream in(describe(cfg));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- omsel-bench -----------------------------------------------------------

struct TrialCost {
  CostCounts counts;
  unsigned partition_rounds = 0;
  std::uint64_t active_cmp = 0;
  bool fell_back = false;
  bool agree = false;
};

struct Summary {
  double mean = 0, min = 0, max = 0;
};

template <typename F>
Summary summarize(const std::vector<TrialCost>& v, F field) {
  Summary s{0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& t : v) {
    const double x = static_cast<double>(field(t));
    s.mean += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean /= static_cast<double>(v.size());
  return s;
}

SharedVector bench_scores(const RunConfig& cfg, Session& s, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, {1}));
  const std::vector<double> raw =
      cfg.workload == Workload::kMcn ? mcn_shaped_scores(n, rng, {}, cfg.mcn.offset, cfg.mcn.exponent)
                                     : uniform_scores(n, rng);
  return tie_break_scores(s, s.share_fixed(raw));
}

}  // namespace

int cmd_omsel_bench(const RunConfig& in, std::ostream& log) {
  const RunConfig cfg = prepare(in);
  const auto profiles = cfg.profiles();
  std::vector<std::string> header{"method", "N", "trials", "cmp_mean", "cmp_min", "cmp_max", "mux_mean", "mux_min",
                                  "mux_max", "rounds_mean", "rounds_min", "rounds_max", "partition_rounds_mean",
                                  "partition_rounds_max", "bytes_mean", "active_cmp_mean", "fallbacks",
                                  "agree_with_bitonic"};
  for (const auto& p : profiles) header.push_back("time_" + p.name + "_s");
  header.push_back("op_ratio_vs_bitonic");
  CsvTable csv(header);
  json results = json::array();

  for (std::size_t n : cfg.n_list) {
    std::vector<TrialCost> bit(cfg.trials), oms(cfg.trials);
    std::vector<std::string> traces(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
      const std::uint64_t seed = derive_seed(cfg.seed, {n, t});
      Session s(session_options(cfg, seed));
      const SharedVector scores = bench_scores(cfg, s, n, seed);
      s.ledger().reset();
      const SharedValue bm = bitonic_median(s, scores);
      bit[t].counts = s.ledger().total();
      bit[t].agree = true;

      s.ledger().reset();
      s.trace().enable(cfg.trace && t == 0);
      const OmselResult r = omsel(s, scores, cfg.omsel);
      oms[t].counts = s.ledger().total();
      oms[t].partition_rounds = r.rounds;
      oms[t].fell_back = r.fell_back;
      for (std::size_t a : r.active_counts) oms[t].active_cmp += a;
      oms[t].agree = s.open_at_dealer(r.median) == s.open_at_dealer(bm);
      if (cfg.trace && t == 0) traces[t] = trace_to_jsonl(s.trace().events());
    });
    if (cfg.trace) write_text(cfg.out_dir / ("omsel_trace_n" + std::to_string(n) + ".jsonl"), traces[0]);

    const double bitonic_ops = summarize(bit, [](const TrialCost& c) { return c.counts.cmp + c.counts.mux; }).mean;
    for (const auto& [name, runs] : {std::pair{"bitonic", &bit}, std::pair{"omsel", &oms}}) {
      const auto cmp = summarize(*runs, [](const TrialCost& c) { return c.counts.cmp; });
      const auto mux = summarize(*runs, [](const TrialCost& c) { return c.counts.mux; });
      const auto rounds = summarize(*runs, [](const TrialCost& c) { return c.counts.rounds; });
      const auto bytes = summarize(*runs, [](const TrialCost& c) { return c.counts.bytes; });
      const bool is_omsel = std::string(name) == "omsel";
      const auto pr = summarize(*runs, [](const TrialCost& c) { return c.partition_rounds; });
      const auto active = summarize(*runs, [](const TrialCost& c) { return c.active_cmp; });
      std::size_t fallbacks = 0, agree = 0;
      for (const auto& c : *runs) {
        fallbacks += c.fell_back;
        agree += c.agree;
      }
      const double ops = cmp.mean + mux.mean;
      std::vector<std::string> row{name,
                                   std::to_string(n),
                                   std::to_string(cfg.trials),
                                   format_number(cmp.mean),
                                   format_number(cmp.min),
                                   format_number(cmp.max),
                                   format_number(mux.mean),
                                   format_number(mux.min),
                                   format_number(mux.max),
                                   format_number(rounds.mean),
                                   format_number(rounds.min),
                                   format_number(rounds.max),
                                   is_omsel ? format_number(pr.mean) : "N/A",
                                   is_omsel ? format_number(pr.max) : "N/A",
                                   format_number(bytes.mean),
                                   is_omsel ? format_number(active.mean) : "N/A",
                                   std::to_string(fallbacks),
                                   std::to_string(agree)};
      json j{{"method", name},
             {"N", n},
             {"trials", cfg.trials},
             {"cmp", {{"mean", cmp.mean}, {"min", cmp.min}, {"max", cmp.max}}},
             {"mux", {{"mean", mux.mean}, {"min", mux.min}, {"max", mux.max}}},
             {"rounds", {{"mean", rounds.mean}, {"min", rounds.min}, {"max", rounds.max}}},
             {"bytes_mean", bytes.mean},
             {"fallbacks", fallbacks},
             {"agree_with_bitonic", agree},
             {"op_ratio_vs_bitonic", bitonic_ops / ops}};
      if (is_omsel) {
        j["partition_rounds"] = {{"mean", pr.mean}, {"min", pr.min}, {"max", pr.max}};
        j["active_cmp_mean"] = active.mean;
      }
      json times = json::object();
      for (const auto& p : profiles) {
        double total = 0;
        for (const auto& c : *runs) total += ledger_time(c.counts, p, cfg.calibration.op_seconds);
        const double mean = total / static_cast<double>(runs->size());
        row.push_back(format_number(mean));
        times[p.name] = mean;
      }
      j["time_s"] = times;
      row.push_back(format_number(bitonic_ops / ops));
      csv.add_row(std::move(row));
      results.push_back(std::move(j));
    }
    log << "omsel-bench: N=" << n << " done\n";
  }
  write_text(cfg.out_dir / "omsel_bench.csv", csv.str());
  write_text(cfg.out_dir / "omsel_bench.json", dump(json{{"config", config_json(cfg)}, {"results", results}}));
  return kExitOk;
}

int cmd_pipeline(const RunConfig& in, std::ostream& log) {
  const RunConfig cfg = prepare(in);
  const StageCostModel model(cfg.calibration);
  MachinerySetup setup;
  setup.session = session_options(cfg, cfg.seed);
  setup.mcn = cfg.mcn;
  setup.omsel = cfg.omsel;
  setup.network = cfg.network;
  MachineryCache cache(setup);

  CsvTable stages({"scheme", "profile", "m0", "layer", "tokens", "stage", "time_s", "cmp", "mux", "bytes"});
  CsvTable summary({"scheme", "profile", "m0", "schedule", "total_s", "speedup_vs_baseline", "machinery_cmp",
                    "machinery_mux", "machinery_rounds", "machinery_bytes"});
  json reports = json::array();
  for (std::size_t m0 : cfg.m0_list) {
    DropPlan plan = cfg.plan;
    plan.m0 = m0;
    for (const NetProfile& net : cfg.profiles()) {
      double baseline = 0;
      for (Scheme scheme : cfg.schemes()) {
        const SchemeReport rep = model_scheme_cost(m0, plan, scheme, model, net, cache);
        if (scheme == Scheme::kBaseline) baseline = rep.total_s;
        const double speedup = baseline / rep.total_s;
        const std::string schedule = scheme == Scheme::kBaseline ? std::to_string(m0) : join_sizes(rep.schedule);
        json rows = json::array();
        for (const StageRow& r : rep.rows) {
          stages.add_row({scheme_name(scheme), net.name, std::to_string(m0), std::to_string(r.layer),
                          std::to_string(r.tokens), r.stage, format_number(r.time_s), std::to_string(r.counts.cmp),
                          std::to_string(r.counts.mux), std::to_string(r.counts.bytes)});
          rows.push_back({{"layer", r.layer}, {"tokens", r.tokens}, {"stage", r.stage}, {"time_s", r.time_s}});
        }
        summary.add_row({scheme_name(scheme), net.name, std::to_string(m0), schedule, format_number(rep.total_s),
                         format_number(speedup), std::to_string(rep.machinery.cmp),
                         std::to_string(rep.machinery.mux), std::to_string(rep.machinery.rounds),
                         std::to_string(rep.machinery.bytes)});
        reports.push_back({{"scheme", scheme_name(scheme)},
                           {"profile", net.name},
                           {"m0", m0},
                           {"schedule", schedule},
                           {"total_s", rep.total_s},
                           {"speedup_vs_baseline", speedup},
                           {"machinery", {{"cmp", rep.machinery.cmp},
                                          {"mux", rep.machinery.mux},
                                          {"mul", rep.machinery.mul},
                                          {"rounds", rep.machinery.rounds},
                                          {"bytes", rep.machinery.bytes}}},
                           {"rows", rows}});
      }
    }
    log << "pipeline: m0=" << m0 << " done\n";
  }
  write_text(cfg.out_dir / "pipeline_stages.csv", stages.str());
  write_text(cfg.out_dir / "pipeline_summary.csv", summary.str());
  write_text(cfg.out_dir / "pipeline.json", dump(json{{"config", config_json(cfg)}, {"reports", reports}}));
  return kExitOk;
}

int cmd_trace(const RunConfig& in, std::ostream& log) {
  const RunConfig cfg = prepare(in);
  const std::size_t n = cfg.n_list.front();
  auto run = [&](std::uint64_t case_index, unsigned* rounds) {
    const std::uint64_t seed = derive_seed(cfg.seed, {n, case_index});
    Session s(session_options(cfg, seed));
    const SharedVector scores = bench_scores(cfg, s, n, seed);
    s.trace().enable(true);
    const OmselResult r = omsel(s, scores, cfg.omsel);
    *rounds = r.rounds;
    return s.trace().events();
  };

  unsigned rounds = 0;
  const auto primary = run(0, &rounds);
  const TraceCheck coverage = verify_partition_coverage(primary, n);
  std::size_t indexed_cmp = 0;
  for (const auto& e : primary) indexed_cmp += (e.op == TraceOp::kCmp && e.index >= 0);

  // A second secret input with the same revealed round count.
  constexpr std::uint64_t kPartnerSearch = 500;
  json partner = nullptr;
  bool equal = false;
  for (std::uint64_t c = 1; c <= kPartnerSearch; ++c) {
    unsigned r2 = 0;
    const auto other = run(c, &r2);
    if (r2 != rounds) continue;
    const TraceCheck cmp = compare_traces(primary, other);
    equal = cmp.ok;
    partner = {{"case_index", c}, {"traces_equal", cmp.ok}, {"message", cmp.message}};
    break;
  }

  write_text(cfg.out_dir / "trace.jsonl", trace_to_jsonl(primary));
  const bool ok = coverage.ok && equal;
  write_text(cfg.out_dir / "trace_check.json",
             dump(json{{"config", config_json(cfg)},
                       {"N", n},
                       {"rounds", rounds},
                       {"partition_cmp_events", indexed_cmp},
                       {"coverage_ok", coverage.ok},
                       {"coverage_message", coverage.message},
                       {"partner", partner},
                       {"pass", ok}}));
  log << "trace: N=" << n << " R=" << rounds << " coverage " << (coverage.ok ? "ok" : "FAILED") << ", partner "
      << (partner.is_null() ? "not found" : (equal ? "equal" : "DIFFERS")) << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_toytask(const RunConfig& in, std::ostream& log) {
  const RunConfig cfg = prepare(in);
  ToyScorerOptions opts;
  opts.ring = cfg.ring;
  opts.mcn = cfg.mcn;
  opts.omsel = cfg.omsel;
  const std::vector<Scorer> scorers{Scorer::kMcn, Scorer::kSoftmaxPh1};

  std::vector<ToyReport> reports(cfg.toy_drops.size() * scorers.size());
  parallel_for(reports.size(), cfg.workers, [&](std::size_t i) {
    ToyTaskConfig task = cfg.toy;
    task.drops = cfg.toy_drops[i / scorers.size()];
    // Both scorers see the same instances for a given depth.
    reports[i] = toy_accuracy_report(task, scorers[i % scorers.size()], derive_seed(cfg.seed, {task.drops}),
                                     cfg.toy_runs, opts);
  });

  CsvTable csv({"scorer", "outliers", "drops", "schedule", "runs", "retention", "probe_accuracy"});
  CsvTable compare({"drops", "outliers", "runs", "mcn_ge_ph1_fraction"});
  json out = json::array();
  for (std::size_t d = 0; d < cfg.toy_drops.size(); ++d) {
    std::vector<std::size_t> schedule{cfg.toy.tokens};
    for (unsigned k = 0; k < cfg.toy_drops[d]; ++k) schedule.push_back(schedule.back() / 2);
    const std::string outliers = cfg.toy.outliers ? "true" : "false";
    for (std::size_t s = 0; s < scorers.size(); ++s) {
      const ToyReport& rep = reports[d * scorers.size() + s];
      const std::string retention = rep.mean_retention ? format_number(*rep.mean_retention) : "N/A";
      csv.add_row({scorer_name(rep.scorer), outliers, std::to_string(cfg.toy_drops[d]), join_sizes(schedule),
                   std::to_string(cfg.toy_runs), retention, format_number(rep.probe_accuracy)});
      out.push_back({{"scorer", scorer_name(rep.scorer)},
                     {"outliers", cfg.toy.outliers},
                     {"drops", cfg.toy_drops[d]},
                     {"schedule", join_sizes(schedule)},
                     {"runs", cfg.toy_runs},
                     {"retention", rep.mean_retention ? json(*rep.mean_retention) : json(nullptr)},
                     {"probe_accuracy", rep.probe_accuracy}});
    }
    const ToyReport& mcn = reports[d * scorers.size()];
    const ToyReport& ph1 = reports[d * scorers.size() + 1];
    std::string fraction = "N/A";
    if (mcn.mean_retention) {
      std::size_t ge = 0;
      for (std::size_t r = 0; r < mcn.runs.size(); ++r) ge += *mcn.runs[r].retention >= *ph1.runs[r].retention;
      fraction = format_number(static_cast<double>(ge) / static_cast<double>(mcn.runs.size()));
    }
    compare.add_row({std::to_string(cfg.toy_drops[d]), outliers, std::to_string(cfg.toy_runs), fraction});
    log << "toytask: drops=" << cfg.toy_drops[d] << " done\n";
  }
  write_text(cfg.out_dir / "toytask.csv", csv.str());
  write_text(cfg.out_dir / "toytask_compare.csv", compare.str());
  write_text(cfg.out_dir / "toytask.json", dump(json{{"config", config_json(cfg)}, {"results", out}}));
  return kExitOk;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"omsel-bench", "pipeline", "trace", "toytask"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> table{
      {"omsel-bench", cmd_omsel_bench}, {"pipeline", cmd_pipeline}, {"trace", cmd_trace}, {"toytask", cmd_toytask}};
  const auto it = table.find(name);
  if (it == table.end()) {
    log << "error: unknown command '" << name << "'\n";
    return kExitIoOrConfig;
  }
  try {
    return it->second(cfg, log);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitIoOrConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitIoOrConfig;
  }
}

}  // namespace dropsim::cli
