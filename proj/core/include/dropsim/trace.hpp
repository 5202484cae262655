#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dropsim {

enum class TraceOp : std::uint8_t { kCmp, kMux, kMul, kOpen, kDiv };

const char* trace_op_name(TraceOp op);

// One primitive invocation. `index` is the vector position the call touched,
// or -1 for scalar bookkeeping.
struct TraceEvent {
  std::uint32_t round = 0;
  TraceOp op = TraceOp::kCmp;
  std::int64_t index = -1;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Access-pattern recorder. Off by default; primitives append when enabled.
class TraceRecorder {
 public:
  void enable(bool on) { enabled_ = on; }
  bool enabled() const { return enabled_; }
  void set_round(std::uint32_t r) { round_ = r; }
  std::uint32_t round() const { return round_; }

  void record(TraceOp op, std::int64_t index) {
    if (enabled_) events_.push_back({round_, op, index});
  }

  const std::vector<TraceEvent>& events() const { return events_; }
  void clear() { events_.clear(); }

 private:
  bool enabled_ = false;
  std::uint32_t round_ = 0;
  std::vector<TraceEvent> events_;
};

struct TraceCheck {
  bool ok = true;
  std::string message;
};

// Every round that contains indexed comparisons must touch each index in
// [0, n) exactly once with Cmp and exactly once with Mux.
TraceCheck verify_partition_coverage(const std::vector<TraceEvent>& events, std::size_t n);

// Identical event sequences.
TraceCheck compare_traces(const std::vector<TraceEvent>& a, const std::vector<TraceEvent>& b);

// One {"index":..,"op":..,"round":..} object per line; scalar ops print null.
std::string trace_to_jsonl(const std::vector<TraceEvent>& events);

}  // namespace dropsim
