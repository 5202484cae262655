#include "dropsim_cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dropsim/errors.hpp"

namespace dropsim::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& want) {
  throw ConfigError("invalid value '" + value + "' for " + key + ": expected " + want);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) bad_value(key, v, "unsigned integer");
  errno = 0;
  const unsigned long long x = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) bad_value(key, v, "unsigned 64-bit integer");
  return x;
}

unsigned parse_uint(const std::string& key, const std::string& v) {
  const std::uint64_t x = parse_u64(key, v);
  if (x > 0xffffffffULL) bad_value(key, v, "32-bit unsigned integer");
  return static_cast<unsigned>(x);
}

double parse_double(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  double x = 0;
  if (!(is >> x) || !(is >> std::ws).eof() || !std::isfinite(x)) bad_value(key, v, "finite number");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  bad_value(key, v, "true or false");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<T>(parse_u64(key, trim(item))));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
      {"ell", [](RunConfig& c, const std::string& k, const std::string& v) { c.ring.ell = parse_uint(k, v); }},
      {"frac_bits",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.ring.frac_bits = parse_uint(k, v); }},
      {"mcn_exponent",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.mcn.exponent = parse_uint(k, v); }},
      {"mcn_offset",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.mcn.offset = parse_double(k, v); }},
      {"omsel_constant_n",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.omsel.divide_by_constant_n = parse_bool(k, v);
       }},
      {"omsel_max_rounds",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.omsel.max_rounds = parse_uint(k, v); }},
      {"compaction",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "logshift") {
           c.network = CompactionNetwork::kLogShift;
         } else if (v == "oddeven") {
           c.network = CompactionNetwork::kOddEvenTransposition;
         } else {
           bad_value(k, v, "logshift or oddeven");
         }
       }},
      {"drop_layers",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.plan.drop_layers = parse_list<unsigned>(k, v);
       }},
      {"num_layers",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.plan.num_layers = parse_uint(k, v); }},
      {"m0",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.m0_list = parse_list<std::size_t>(k, v); }},
      {"profile", [](RunConfig& c, const std::string&, const std::string& v) { c.profile = v; }},
      {"bandwidth_bps",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.bandwidth_bps = parse_double(k, v); }},
      {"latency_s",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.latency_s = parse_double(k, v); }},
      {"calibration",
       [](RunConfig& c, const std::string&, const std::string& v) {
         if (v.empty()) {
           c.calibration_path.reset();
         } else {
           c.calibration_path = v;
         }
       }},
      {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
      {"n", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_list = parse_list<std::size_t>(k, v); }},
      {"trials", [](RunConfig& c, const std::string& k, const std::string& v) { c.trials = parse_uint(k, v); }},
      {"workload",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "mcn") {
           c.workload = Workload::kMcn;
         } else if (v == "uniform") {
           c.workload = Workload::kUniform;
         } else {
           bad_value(k, v, "mcn or uniform");
         }
       }},
      {"scheme",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "baseline") {
           c.scheme = SchemeSelection::kBaseline;
         } else if (v == "post") {
           c.scheme = SchemeSelection::kPost;
         } else if (v == "pre") {
           c.scheme = SchemeSelection::kPre;
         } else if (v == "all") {
           c.scheme = SchemeSelection::kAll;
         } else {
           bad_value(k, v, "baseline, post, pre or all");
         }
       }},
      {"trace", [](RunConfig& c, const std::string& k, const std::string& v) { c.trace = parse_bool(k, v); }},
      {"workers", [](RunConfig& c, const std::string& k, const std::string& v) { c.workers = parse_uint(k, v); }},
      {"toy_tokens",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy.tokens = parse_u64(k, v); }},
      {"toy_signal",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy.signal = parse_u64(k, v); }},
      {"toy_signal_logit",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy.signal_logit = parse_double(k, v); }},
      {"toy_outliers",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy.outliers = parse_bool(k, v); }},
      {"toy_sink_fraction",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy.sink_fraction = parse_double(k, v); }},
      {"toy_embed_dim",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy.embed_dim = parse_u64(k, v); }},
      {"toy_drops",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.toy_drops = parse_list<unsigned>(k, v); }},
      {"toy_runs", [](RunConfig& c, const std::string& k, const std::string& v) { c.toy_runs = parse_uint(k, v); }},
  };
  return table;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::vector<NetProfile> RunConfig::profiles() const {
  if (profile == "all") return {NetProfile::lan(), NetProfile::wan(), NetProfile::mobile()};
  if (profile == "custom") return {NetProfile{"custom", bandwidth_bps, latency_s}};
  return {*NetProfile::named(profile)};
}

std::vector<Scheme> RunConfig::schemes() const {
  switch (scheme) {
    case SchemeSelection::kBaseline: return {Scheme::kBaseline};
    case SchemeSelection::kPost: return {Scheme::kBaseline, Scheme::kPostDrop};
    case SchemeSelection::kPre: return {Scheme::kBaseline, Scheme::kPreDrop};
    case SchemeSelection::kAll: break;
  }
  return {Scheme::kBaseline, Scheme::kPostDrop, Scheme::kPreDrop};
}

Overrides parse_config_text(const std::string& text) {
  Overrides out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (setters().count(key) == 0) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

Overrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_overrides(RunConfig& cfg, const Overrides& kv) {
  for (const auto& [key, value] : kv) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
}

void validate(RunConfig& cfg) {
  try {
    cfg.ring.validate();
    cfg.mcn.validate();
    cfg.toy.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (cfg.profile != "all" && cfg.profile != "custom" && !NetProfile::named(cfg.profile)) {
    throw ConfigError("unknown profile '" + cfg.profile + "': expected lan, wan, mobile, custom or all");
  }
  if (cfg.profile == "custom") {
    try {
      NetProfile{"custom", cfg.bandwidth_bps, cfg.latency_s}.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("custom profile: ") + e.what());
    }
  }
  if (cfg.n_list.empty()) throw ConfigError("n: list is empty");
  for (std::size_t n : cfg.n_list) {
    if (n < 2 || n % 2 != 0 || n > 4096) throw ConfigError("n: " + std::to_string(n) + " is not an even size in [2, 4096]");
  }
  if (cfg.m0_list.empty()) throw ConfigError("m0: list is empty");
  for (std::size_t m0 : cfg.m0_list) {
    DropPlan p = cfg.plan;
    p.m0 = m0;
    try {
      p.validate();
    } catch (const std::exception& e) {
      throw ConfigError("plan at m0=" + std::to_string(m0) + ": " + e.what());
    }
    if (m0 > 1024) throw ConfigError("m0: " + std::to_string(m0) + " exceeds 1024");
  }
  if (cfg.trials == 0) throw ConfigError("trials must be positive");
  if (cfg.workers == 0 || cfg.workers > 256) throw ConfigError("workers must be in [1, 256]");
  if (cfg.toy_runs == 0) throw ConfigError("toy_runs must be positive");
  if (cfg.toy_drops.empty()) throw ConfigError("toy_drops: list is empty");
  for (unsigned d : cfg.toy_drops) {
    ToyTaskConfig t = cfg.toy;
    t.drops = d;
    try {
      t.validate();
    } catch (const std::exception& e) {
      throw ConfigError("toy_drops=" + std::to_string(d) + ": " + e.what());
    }
  }
  cfg.calibration = Calibration::defaults();
  if (cfg.calibration_path) {
    std::ifstream in(*cfg.calibration_path);
    if (!in) throw ConfigError("cannot read calibration file " + cfg.calibration_path->string());
    try {
      cfg.calibration = load_calibration(in);
    } catch (const std::exception& e) {
      throw ConfigError(cfg.calibration_path->string() + ": " + e.what());
    }
  }
}

std::string describe(const RunConfig& c) {
  std::map<std::string, std::string> kv{
      {"seed", std::to_string(c.seed)},
      {"ell", std::to_string(c.ring.ell)},
      {"frac_bits", std::to_string(c.ring.frac_bits)},
      {"mcn_exponent", std::to_string(c.mcn.exponent)},
      {"mcn_offset", fmt_double(c.mcn.offset)},
      {"omsel_constant_n", c.omsel.divide_by_constant_n ? "true" : "false"},
      {"omsel_max_rounds", std::to_string(c.omsel.max_rounds)},
      {"compaction", compaction_network_name(c.network)},
      {"drop_layers", join(c.plan.drop_layers)},
      {"num_layers", std::to_string(c.plan.num_layers)},
      {"m0", join(c.m0_list)},
      {"profile", c.profile},
      {"bandwidth_bps", fmt_double(c.bandwidth_bps)},
      {"latency_s", fmt_double(c.latency_s)},
      {"calibration", c.calibration_path ? c.calibration_path->string() : ""},
      {"n", join(c.n_list)},
      {"trials", std::to_string(c.trials)},
      {"workload", c.workload == Workload::kMcn ? "mcn" : "uniform"},
      {"trace", c.trace ? "true" : "false"},
      {"toy_tokens", std::to_string(c.toy.tokens)},
      {"toy_signal", std::to_string(c.toy.signal)},
      {"toy_signal_logit", fmt_double(c.toy.signal_logit)},
      {"toy_outliers", c.toy.outliers ? "true" : "false"},
      {"toy_sink_fraction", fmt_double(c.toy.sink_fraction)},
      {"toy_embed_dim", std::to_string(c.toy.embed_dim)},
      {"toy_drops", join(c.toy_drops)},
      {"toy_runs", std::to_string(c.toy_runs)},
  };
  const char* schemes[] = {"baseline", "post", "pre", "all"};
  kv["scheme"] = schemes[static_cast<int>(c.scheme)];
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace dropsim::cli
