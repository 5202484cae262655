#include "dropsim/cost_model.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "dropsim/errors.hpp"

namespace dropsim {
namespace {

std::size_t idx(Stage s) { return static_cast<std::size_t>(s); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kQkv: return "QKV";
    case Stage::kQxK: return "QxK";
    case Stage::kSoftmax: return "Softmax";
    case Stage::kXv: return "xV";
    case Stage::kLn2: return "ln2";
    case Stage::kLayerNorm: return "LayerNorm";
    case Stage::kLn3: return "ln3";
    case Stage::kGelu: return "GELU";
    case Stage::kLn4: return "ln4";
  }
  return "?";
}

std::optional<Stage> stage_from_name(const std::string& name) {
  for (Stage s : kAllStages) {
    if (name == stage_name(s)) return s;
  }
  return std::nullopt;
}

int stage_exponent(Stage s) {
  switch (s) {
    case Stage::kQxK:
    case Stage::kSoftmax:
    case Stage::kXv:
      return 2;
    default:
      return 1;
  }
}

void NetProfile::validate() const {
  if (!(bandwidth_bps > 0)) throw DomainError("profile " + name + ": bandwidth must be positive");
  if (!(latency_s >= 0)) throw DomainError("profile " + name + ": latency must be non-negative");
}

std::optional<NetProfile> NetProfile::named(const std::string& name) {
  if (name == "lan") return lan();
  if (name == "wan") return wan();
  if (name == "mobile") return mobile();
  return std::nullopt;
}

Calibration Calibration::defaults() {
  Calibration c;
  //                QKV   QxK   Softmax xV    ln2   LN    ln3   GELU  ln4
  c.share =        {0.12, 0.10, 0.22,   0.10, 0.06, 0.04, 0.14, 0.08, 0.14};
  c.plaintext_share = {0.15, 0.04, 0.02, 0.04, 0.05, 0.01, 0.34, 0.01, 0.34};
  // Nonlinear stages are communication heavy; the totals come to roughly
  // 0.06% latency and 4.5% bandwidth of a LAN layer.
  for (Stage s : kAllStages) {
    const bool nonlinear = s == Stage::kSoftmax || s == Stage::kLayerNorm || s == Stage::kGelu;
    c.latency_fraction[idx(s)] = nonlinear ? 0.001 : 0.00006;
    c.bandwidth_fraction[idx(s)] = nonlinear ? 0.05 : 0.025;
  }
  c.latency_fraction[idx(Stage::kSoftmax)] = 0.002;
  c.bandwidth_fraction[idx(Stage::kSoftmax)] = 0.10;
  return c;
}

void Calibration::validate() const {
  reference.validate();
  if (!(reference_tokens > 0) || !(reference_layer_seconds > 0)) {
    throw DomainError("calibration reference tokens and seconds must be positive");
  }
  double total = 0;
  for (Stage s : kAllStages) {
    const std::size_t i = idx(s);
    if (share[i] < 0) throw DomainError(std::string("negative share for ") + stage_name(s));
    if (latency_fraction[i] < 0 || bandwidth_fraction[i] < 0 || latency_fraction[i] + bandwidth_fraction[i] >= 1) {
      throw DomainError(std::string("latency/bandwidth fractions for ") + stage_name(s) + " must leave compute time");
    }
    total += share[i];
  }
  if (std::fabs(total - 1.0) > 1e-6) throw DomainError("stage shares must sum to 1");
  if (softmax_exp_fraction < 0 || softmax_exp_fraction > 1) throw DomainError("softmax_exp_fraction outside [0, 1]");
  if (op_seconds < 0) throw DomainError("op_seconds must be non-negative");
}

Calibration load_calibration(std::istream& in) {
  Calibration c = Calibration::defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("calibration line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string text = trim(line.substr(eq + 1));
    double value = 0;
    std::istringstream vs(text);
    if (!(vs >> value) || !(vs >> std::ws).eof()) {
      throw DomainError("calibration line " + std::to_string(lineno) + ": '" + text + "' is not a number");
    }
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      const auto stage = stage_from_name(key.substr(dot + 1));
      const std::string table = key.substr(0, dot);
      if (!stage) throw DomainError("calibration line " + std::to_string(lineno) + ": unknown stage in '" + key + "'");
      if (table == "share") {
        c.share[idx(*stage)] = value;
      } else if (table == "latency_fraction") {
        c.latency_fraction[idx(*stage)] = value;
      } else if (table == "bandwidth_fraction") {
        c.bandwidth_fraction[idx(*stage)] = value;
      } else if (table == "plaintext_share") {
        c.plaintext_share[idx(*stage)] = value;
      } else {
        throw DomainError("calibration line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } else if (key == "reference_tokens") {
      c.reference_tokens = value;
    } else if (key == "reference_layer_seconds") {
      c.reference_layer_seconds = value;
    } else if (key == "softmax_exp_fraction") {
      c.softmax_exp_fraction = value;
    } else if (key == "op_seconds") {
      c.op_seconds = value;
    } else {
      throw DomainError("calibration line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

double stage_time(const StageCost& c, const NetProfile& net) {
  return c.compute_s + c.rounds * net.latency_s + c.bytes * 8.0 / net.bandwidth_bps;
}

double ledger_time(const CostCounts& c, const NetProfile& net, double op_seconds) {
  const double ops = static_cast<double>(c.cmp + c.mux + c.mul + c.recip + c.trunc + c.open);
  return ops * op_seconds + static_cast<double>(c.rounds) * net.latency_s +
         static_cast<double>(c.bytes) * 8.0 / net.bandwidth_bps;
}

StageCostModel::StageCostModel(Calibration cal) : cal_(std::move(cal)) { cal_.validate(); }

StageCost StageCostModel::cost(Stage s, double tokens) const {
  const std::size_t i = idx(s);
  const double base = cal_.share[i] * cal_.reference_layer_seconds;
  const double factor = std::pow(tokens / cal_.reference_tokens, stage_exponent(s));
  StageCost c;
  c.compute_s = (1.0 - cal_.latency_fraction[i] - cal_.bandwidth_fraction[i]) * base * factor;
  c.rounds = cal_.latency_fraction[i] * base / cal_.reference.latency_s * factor;
  c.bytes = cal_.bandwidth_fraction[i] * base * cal_.reference.bandwidth_bps / 8.0 * factor;
  return c;
}

std::pair<double, double> StageCostModel::softmax_phases(double tokens, const NetProfile& net) const {
  const double t = time(Stage::kSoftmax, tokens, net);
  return {cal_.softmax_exp_fraction * t, (1.0 - cal_.softmax_exp_fraction) * t};
}

}  // namespace dropsim
