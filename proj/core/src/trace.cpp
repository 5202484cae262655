#include "dropsim/trace.hpp"

#include <map>
#include <sstream>

namespace dropsim {

const char* trace_op_name(TraceOp op) {
  switch (op) {
    case TraceOp::kCmp: return "cmp";
    case TraceOp::kMux: return "mux";
    case TraceOp::kMul: return "mul";
    case TraceOp::kOpen: return "open";
    case TraceOp::kDiv: return "div";
  }
  return "unknown";
}

TraceCheck verify_partition_coverage(const std::vector<TraceEvent>& events, std::size_t n) {
  // round -> per-index hit counts for cmp and mux
  std::map<std::uint32_t, std::pair<std::vector<int>, std::vector<int>>> hits;
  for (const auto& e : events) {
    if (e.index < 0 || (e.op != TraceOp::kCmp && e.op != TraceOp::kMux)) continue;
    auto& [cmp, mux] = hits[e.round];
    if (cmp.empty()) {
      cmp.assign(n, 0);
      mux.assign(n, 0);
    }
    if (static_cast<std::size_t>(e.index) >= n) {
      return {false, "index " + std::to_string(e.index) + " outside [0, " + std::to_string(n) + ")"};
    }
    (e.op == TraceOp::kCmp ? cmp : mux)[static_cast<std::size_t>(e.index)]++;
  }
  if (hits.empty()) return {false, "trace has no indexed partition events"};
  for (const auto& [round, counts] : hits) {
    for (std::size_t i = 0; i < n; ++i) {
      if (counts.first[i] != 1 || counts.second[i] != 1) {
        std::ostringstream os;
        os << "round " << round << " index " << i << ": cmp x" << counts.first[i] << ", mux x"
           << counts.second[i];
        return {false, os.str()};
      }
    }
  }
  return {true, "ok: " + std::to_string(hits.size()) + " rounds fully covered"};
}

TraceCheck compare_traces(const std::vector<TraceEvent>& a, const std::vector<TraceEvent>& b) {
  if (a.size() != b.size()) {
    return {false, "lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size())};
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return {false, "first difference at event " + std::to_string(i)};
  }
  return {true, "ok: traces identical"};
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& events) {
  std::ostringstream os;
  for (const auto& e : events) {
    os << "{\"index\":";
    if (e.index < 0) {
      os << "null";
    } else {
      os << e.index;
    }
    os << ",\"op\":\"" << trace_op_name(e.op) << "\",\"round\":" << e.round << "}\n";
  }
  return os.str();
}

}  // namespace dropsim
