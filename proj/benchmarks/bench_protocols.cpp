#include <benchmark/benchmark.h>

#include <random>

#include "dropsim/mcn.hpp"
#include "dropsim/omsel.hpp"
#include "dropsim/token_drop.hpp"
#include "dropsim/workload.hpp"

namespace {

using namespace dropsim;

Session make_session(std::uint64_t seed) {
  SessionOptions o;
  o.seed = seed;
  return Session(o);
}

void report_counts(benchmark::State& state, const CostCounts& c) {
  state.counters["cmp"] = static_cast<double>(c.cmp);
  state.counters["mux"] = static_cast<double>(c.mux);
  state.counters["rounds"] = static_cast<double>(c.rounds);
}

void BM_Omsel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Session s = make_session(n);
  std::mt19937_64 rng(n);
  const SharedVector scores = tie_break_scores(s, s.share_fixed(mcn_shaped_scores(n, rng)));
  for (auto _ : state) {
    s.ledger().reset();
    benchmark::DoNotOptimize(omsel(s, scores));
  }
  report_counts(state, s.ledger().total());
}
BENCHMARK(BM_Omsel)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMicrosecond);

void BM_BitonicMedian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Session s = make_session(n);
  std::mt19937_64 rng(n);
  const SharedVector scores = s.share_fixed(uniform_scores(n, rng));
  for (auto _ : state) {
    s.ledger().reset();
    benchmark::DoNotOptimize(bitonic_median(s, scores));
  }
  report_counts(state, s.ledger().total());
}
BENCHMARK(BM_BitonicMedian)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMicrosecond);

void BM_McnAggregate(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Session s = make_session(m);
  std::mt19937_64 rng(m);
  const SyntheticAttentionConfig shape;
  const AttentionMatrix a = share_attention(s, flatten_heads(random_attention(m, shape, rng)), m, shape.heads);
  for (auto _ : state) {
    s.ledger().reset();
    benchmark::DoNotOptimize(aggregate_scores(s, a, McnConfig{}));
  }
  report_counts(state, s.ledger().total());
}
BENCHMARK(BM_McnAggregate)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_Compaction(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto network = static_cast<CompactionNetwork>(state.range(1));
  Session s = make_session(n);
  std::vector<RingElement> bits(n, RingElement{0});
  for (std::size_t i = 0; i < n; i += 2) bits[i] = RingElement{1};
  const SharedVector keep = s.share(bits);
  const TokenMatrix tokens = share_tokens(s, std::vector<double>(n * 32, 1.0), n, 32);
  for (auto _ : state) {
    s.ledger().reset();
    benchmark::DoNotOptimize(oblivious_compact(s, tokens, keep, network));
  }
  report_counts(state, s.ledger().total());
  state.SetLabel(compaction_network_name(network));
}
BENCHMARK(BM_Compaction)
    ->ArgsProduct({{16, 64, 256}, {static_cast<int>(CompactionNetwork::kLogShift),
                                   static_cast<int>(CompactionNetwork::kOddEvenTransposition)}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
