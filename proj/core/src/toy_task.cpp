#include "dropsim/toy_task.hpp"

#include <algorithm>
#include <numeric>

#include "dropsim/errors.hpp"
#include "dropsim/primitives.hpp"
#include "dropsim/session.hpp"
#include "dropsim/token_drop.hpp"
#include "dropsim/workload.hpp"

namespace dropsim {
namespace {

Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = a(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
  }
  return out;
}

std::vector<std::size_t> secure_mcn_keep(const Matrix& logits, std::uint64_t seed, const ToyScorerOptions& opts) {
  SessionOptions so;
  so.ring = opts.ring;
  so.seed = seed;
  Session s(so);
  const auto m = static_cast<std::size_t>(logits.rows());
  const AttentionMatrix a = share_attention(s, flatten_rows(logits), m, 1);
  const ScoreVector scores = tie_break_scores(s, aggregate_scores(s, a, opts.mcn));
  const OmselResult sel = omsel(s, scores, opts.omsel);
  const std::vector<RingElement> bits = s.open_at_dealer(keep_bits(s, scores, sel.median));
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i].value == 1) kept.push_back(i);
  }
  return kept;
}

}  // namespace

const char* scorer_name(Scorer s) { return s == Scorer::kMcn ? "mcn" : "softmax_ph1"; }

void ToyTaskConfig::validate() const {
  if (tokens < 2 || (tokens >> drops) < 1 || tokens % (std::size_t{1} << drops) != 0) {
    throw DomainError("toy task: tokens must be divisible by 2^drops");
  }
  if (signal > tokens) throw DomainError("toy task: more signal tokens than tokens");
  if (sink_fraction < 0 || sink_fraction > 1) throw DomainError("toy task: sink_fraction outside [0, 1]");
  const auto sinks = static_cast<std::size_t>(sink_fraction * static_cast<double>(tokens));
  if (outliers && signal + sinks > tokens) throw DomainError("toy task: signal and sink tokens overlap");
  if (outlier_hi < outlier_lo) throw DomainError("toy task: empty outlier range");
  if (embed_dim == 0) throw DomainError("toy task: embed_dim must be positive");
}

ToyInstance make_toy_instance(const ToyTaskConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const auto m = static_cast<Eigen::Index>(cfg.tokens);
  std::normal_distribution<double> normal(0.0, 1.0);
  ToyInstance inst;
  inst.logits.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) inst.logits(i, j) = normal(rng);
  }

  std::vector<std::size_t> perm(cfg.tokens);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  inst.signal_idx.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cfg.signal));
  std::sort(inst.signal_idx.begin(), inst.signal_idx.end());
  for (std::size_t j : inst.signal_idx) inst.logits.col(static_cast<Eigen::Index>(j)).array() += cfg.signal_logit;

  if (cfg.outliers) {
    const auto sinks = static_cast<std::size_t>(cfg.sink_fraction * static_cast<double>(cfg.tokens));
    std::uniform_real_distribution<double> extreme(cfg.outlier_lo, cfg.outlier_hi);
    const auto first = perm.begin() + static_cast<std::ptrdiff_t>(cfg.signal);
    const std::vector<std::size_t> sink(first, first + static_cast<std::ptrdiff_t>(sinks));
    for (std::size_t i : sink) {
      for (std::size_t j : sink) inst.logits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = extreme(rng);
    }
  }

  inst.label = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
  inst.embeddings.resize(m, static_cast<Eigen::Index>(cfg.embed_dim));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < inst.embeddings.cols(); ++k) inst.embeddings(i, k) = normal(rng);
  }
  for (std::size_t j : inst.signal_idx) inst.embeddings(static_cast<Eigen::Index>(j), 0) += inst.label * cfg.embed_signal;
  return inst;
}

std::vector<double> ph1_column_scores(const Matrix& logits) {
  std::vector<double> scores(static_cast<std::size_t>(logits.cols()), 0.0);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    for (Eigen::Index j = 0; j < logits.cols(); ++j) scores[static_cast<std::size_t>(j)] += std::exp(logits(i, j) - mx);
  }
  return scores;
}

ToyRunResult toy_accuracy_run(const ToyTaskConfig& cfg, Scorer scorer, std::uint64_t seed,
                              const ToyScorerOptions& opts) {
  std::mt19937_64 rng(derive_seed(seed, {0}));
  const ToyInstance inst = make_toy_instance(cfg, rng);

  std::vector<std::size_t> alive(cfg.tokens);
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  for (unsigned step = 0; step < cfg.drops; ++step) {
    const Matrix sub = submatrix(inst.logits, alive);
    const std::vector<std::size_t> local =
        scorer == Scorer::kMcn ? secure_mcn_keep(sub, derive_seed(seed, {1, step}), opts)
                               : median_keep_set(ph1_column_scores(sub));
    std::vector<std::size_t> next;
    for (std::size_t k : local) next.push_back(alive[k]);
    alive = std::move(next);
  }

  ToyRunResult out;
  out.kept = alive;
  if (!inst.signal_idx.empty()) {
    std::size_t hit = 0;
    for (std::size_t j : inst.signal_idx) hit += std::binary_search(alive.begin(), alive.end(), j) ? 1 : 0;
    out.retention = static_cast<double>(hit) / static_cast<double>(inst.signal_idx.size());
  }
  // Fixed linear probe on the class direction of the mean kept embedding.
  double pooled = 0;
  for (std::size_t j : alive) pooled += inst.embeddings(static_cast<Eigen::Index>(j), 0);
  out.probe_correct = (pooled >= 0 ? 1 : -1) == inst.label;
  return out;
}

ToyReport toy_accuracy_report(const ToyTaskConfig& cfg, Scorer scorer, std::uint64_t seed, std::size_t runs,
                              const ToyScorerOptions& opts) {
  ToyReport rep;
  rep.scorer = scorer;
  rep.task = cfg;
  double retained = 0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    rep.runs.push_back(toy_accuracy_run(cfg, scorer, derive_seed(seed, {r}), opts));
    if (rep.runs.back().retention) retained += *rep.runs.back().retention;
    correct += rep.runs.back().probe_correct ? 1 : 0;
  }
  if (cfg.signal > 0 && runs > 0) rep.mean_retention = retained / static_cast<double>(runs);
  rep.probe_accuracy = runs > 0 ? static_cast<double>(correct) / static_cast<double>(runs) : 0.0;
  return rep;
}

}  // namespace dropsim
