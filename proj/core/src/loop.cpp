#include "rmqcal/loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rmqcal/error.hpp"
#include "rmqcal/eval.hpp"
#include "rmqcal/random.hpp"

namespace rmqcal {

namespace {

constexpr std::uint64_t kStreamInitial = 1;
constexpr std::uint64_t kStreamRandomBaseline = 2;
constexpr std::uint64_t kStreamCommittee = 0x100000;
constexpr std::uint64_t kStreamRandomCriterion = 0x200000;

void warn(std::vector<std::string>* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

std::size_t fraction_target(double fraction, std::size_t pool_size) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pool_size) - 1e-9));
}

bool has_both_classes(const std::vector<int>& labels) {
  return std::find(labels.begin(), labels.end(), 1) != labels.end() &&
         std::find(labels.begin(), labels.end(), -1) != labels.end();
}

// First `count` positions by ascending (value, position).
std::vector<std::size_t> lowest(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  idx.resize(std::min(count, idx.size()));
  return idx;
}

std::vector<std::string> criterion_names(const std::vector<CriterionName>& criteria) {
  std::vector<std::string> out;
  for (auto c : criteria) out.emplace_back(to_string(c));
  return out;
}

bool needs_ted(const ALConfig& cfg) {
  return cfg.initial_batch == InitialBatch::ted ||
         std::find(cfg.criteria.begin(), cfg.criteria.end(), CriterionName::ted) != cfg.criteria.end();
}

using Selector = std::function<IterationRecord(const PoolState&, std::size_t t, std::vector<std::string>*)>;

// Shared iteration driver: initial batch, then selector-driven batches with
// checkpoint evaluation after every oracle call.
RunTrace drive(const Problem& problem, const ALConfig& cfg, std::string method, const TedCache* ted,
               const Selector& select) {
  if (problem.data == nullptr) throw PreconditionError("problem has no dataset");
  const Dataset& data = *problem.data;
  RunTrace trace;
  trace.method = std::move(method);
  trace.criteria = criterion_names(cfg.criteria);

  const std::size_t pool_size = problem.pool.pool_size();
  const std::size_t budget_target = std::max<std::size_t>(fraction_target(cfg.budget, pool_size), 1);
  std::vector<bool> done(cfg.checkpoints.size(), false);

  auto evaluate_reached = [&](const PoolState& pool) {
    for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
      if (done[c]) continue;
      const std::size_t target = fraction_target(cfg.checkpoints[c], pool_size);
      if (pool.labeled.size() >= target) {
        trace.checkpoints.push_back(evaluate_checkpoint(data, pool, problem.test, cfg.learner, cfg.checkpoints[c]));
        done[c] = true;
      }
    }
  };

  PoolState pool = initial_batch(data, problem.pool, cfg, ted, &trace.warnings);
  IterationRecord first;
  first.t = 0;
  first.selected = pool.labeled;
  first.n_labeled = pool.labeled.size();
  trace.iterations.push_back(std::move(first));
  evaluate_reached(pool);

  std::size_t t = 1;
  while (pool.labeled.size() < budget_target && !pool.unlabeled.empty()) {
    IterationRecord rec = select(pool, t, &trace.warnings);
    pool = oracle_label(pool, rec.selected, data);
    pool.check_partition(data.size());
    rec.t = t;
    rec.n_labeled = pool.labeled.size();
    trace.iterations.push_back(std::move(rec));
    evaluate_reached(pool);
    ++t;
  }
  trace.final_pool = std::move(pool);
  return trace;
}

std::optional<TedCache> maybe_ted(const Problem& problem, const ALConfig& cfg) {
  if (!needs_ted(cfg)) return std::nullopt;
  return TedCache(*problem.data, problem.pool, cfg.ted);
}

}  // namespace

std::string_view to_string(InitialBatch b) { return b == InitialBatch::ted ? "ted" : "random"; }

void ALConfig::validate() const {
  if (criteria.empty()) throw PreconditionError("config: at least one criterion required");
  if (batch_size < 1) throw PreconditionError("config: batch size N must be >= 1");
  if (initial_size < 2) throw PreconditionError("config: initial batch size must be >= 2");
  if (!(budget > 0.0 && budget <= 1.0)) throw PreconditionError("config: budget must lie in (0, 1]");
  if (committee_size < 2) throw PreconditionError("config: committee size must be >= 2");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0 && checkpoints[i] <= 1.0)) throw PreconditionError("config: checkpoints must lie in (0, 1]");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) {
      throw PreconditionError("config: checkpoints must be strictly increasing");
    }
  }
  if (!(aggregation.tun1 > 0.0 && aggregation.tun1 < 1.0)) throw PreconditionError("config: tun1 must lie in (0, 1)");
  if (!(aggregation.p >= 1.0)) throw PreconditionError("config: p must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw PreconditionError("config: test_fraction must lie in (0, 1)");
  learner.validate();
}

Problem make_problem(const Dataset& data, double test_fraction, std::uint64_t seed) {
  data.validate();
  Split split = split_pool(data, SplitSpec{test_fraction, seed});
  Problem p;
  p.data = &data;
  p.test = std::move(split.test);
  p.pool = std::move(split.pool);
  return p;
}

TedCache::TedCache(const Dataset& data, const PoolState& initial_pool, const TedOptions& options) {
  const auto& idx = initial_pool.unlabeled;
  if (idx.size() < 2) throw PreconditionError("ted: pool needs at least two samples");
  const ScoreList s = score_ted(data.rows(idx), options);
  for (std::size_t i = 0; i < idx.size(); ++i) scores_[idx[i]] = s.values[i];
  flagged_ = s.flagged;
}

double TedCache::score(std::size_t index) const {
  auto it = scores_.find(index);
  if (it == scores_.end()) throw PreconditionError("ted cache: sample was not in the initial pool");
  return it->second;
}

ScoreList TedCache::restrict_to(const std::vector<std::size_t>& unlabeled) const {
  ScoreList out;
  out.criterion = CriterionName::ted;
  out.flagged = flagged_;
  out.values.reserve(unlabeled.size());
  for (std::size_t i : unlabeled) out.values.push_back(score(i));
  return out;
}

ScoreList compute_scores(CriterionName criterion, const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                         const TedCache* ted, std::size_t t) {
  const Eigen::MatrixXd u = data.rows(pool.unlabeled);
  switch (criterion) {
    case CriterionName::margin: {
      const Model m = fit(cfg.learner, data.rows(pool.labeled), pool.labeled_labels);
      return score_margin(m, u);
    }
    case CriterionName::qbc: {
      const Committee c = fit_committee(cfg.learner, data.rows(pool.labeled), pool.labeled_labels, cfg.committee_size,
                                        splitmix64(cfg.seed) ^ (kStreamCommittee + t));
      return score_qbc(c, u);
    }
    case CriterionName::diversity:
      return score_diversity(data.rows(pool.labeled), u, cfg.learner.kernel_for(data.dims()), cfg.diversity_reduce);
    case CriterionName::ted: {
      if (ted == nullptr) throw PreconditionError("ted criterion requires a TED cache");
      return ted->restrict_to(pool.unlabeled);
    }
    case CriterionName::random:
      return score_random(pool.unlabeled.size(), splitmix64(cfg.seed) ^ (kStreamRandomCriterion + t));
  }
  throw PreconditionError("unknown criterion");
}

PoolState initial_batch(const Dataset& data, const PoolState& pool, const ALConfig& cfg, const TedCache* ted,
                        std::vector<std::string>* warnings) {
  const auto& u = pool.unlabeled;
  if (u.size() < cfg.initial_size) {
    throw PreconditionError("initial batch of " + std::to_string(cfg.initial_size) + " exceeds pool of " +
                            std::to_string(u.size()));
  }
  Rng rng = Rng::derive(cfg.seed, kStreamInitial);
  std::vector<std::size_t> batch;
  if (cfg.initial_batch == InitialBatch::ted) {
    if (ted == nullptr) throw PreconditionError("ted initial batch requires a TED cache");
    const ScoreList s = ted->restrict_to(u);
    for (std::size_t pos : lowest(s.values, cfg.initial_size)) batch.push_back(u[pos]);
  } else {
    batch = rng.sample(u, cfg.initial_size);
  }
  PoolState next = oracle_label(pool, batch, data);

  std::size_t draws = 0;
  while (!has_both_classes(next.labeled_labels)) {
    if (next.unlabeled.empty()) {
      throw DomainError("pool exhausted before both classes were labeled");
    }
    if (draws == cfg.max_topup) {
      warn(warnings, "initial batch: single-class labeled set after " + std::to_string(draws) + " random top-ups");
      break;
    }
    const std::size_t pick = next.unlabeled[rng.uniform_index(next.unlabeled.size())];
    const std::vector<std::size_t> one{pick};
    next = oracle_label(next, one, data);
    ++draws;
  }
  if (draws > 0 && has_both_classes(next.labeled_labels)) {
    warn(warnings, "initial batch: topped up with " + std::to_string(draws) + " random samples to see both classes");
  }
  // the top-ups belong to the initial batch
  next.iteration = pool.iteration + 1;
  next.history = pool.history;
  next.history.push_back(next.labeled);
  return next;
}

StepResult rmqcal_select(const Dataset& data, const PoolState& pool, const ALConfig& cfg, const TedCache* ted) {
  const auto& u = pool.unlabeled;
  const std::size_t n = cfg.batch_size;
  const std::size_t L = cfg.criteria.size();
  if (u.empty()) throw PreconditionError("rmqcal: unlabeled pool is empty");
  StepResult r;
  if (u.size() <= n) {
    r.batch = u;
    r.weights = blend_weights(std::vector<double>(L, 1.0), std::vector<bool>(L, false));
    r.ranking.order.resize(u.size());
    std::iota(r.ranking.order.begin(), r.ranking.order.end(), std::size_t{0});
    r.ranking.scores.assign(u.size(), 0.0);
    r.ranking.candidate_count = u.size();
    return r;
  }

  std::vector<NormalizedScoreList> normalized;
  std::vector<bool> committee;
  for (auto c : cfg.criteria) {
    r.scores.push_back(compute_scores(c, data, pool, cfg, ted, pool.iteration));
    auto [ns, ranks] = normalize_and_rank(r.scores.back());
    normalized.push_back(std::move(ns));
    r.ranks.push_back(std::move(ranks));
    committee.push_back(is_committee(c));
  }
  r.weights = compute_weights(normalized, cfg.criteria, n);
  r.ranking = aggregate(cfg.aggregator, r.ranks, r.weights.weights, committee, n, n, cfg.aggregation);
  for (std::size_t pos : r.ranking.top(n)) r.batch.push_back(u[pos]);
  return r;
}

std::pair<PoolState, StepResult> rmqcal_step(const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                                             const TedCache* ted) {
  StepResult r = rmqcal_select(data, pool, cfg, ted);
  PoolState next = oracle_label(pool, r.batch, data);
  return {std::move(next), std::move(r)};
}

std::vector<std::size_t> serial_layers(const ALConfig& cfg, std::size_t pool_size, std::vector<std::string>* warnings) {
  const std::size_t L = cfg.criteria.size();
  const std::size_t n = cfg.batch_size;
  std::vector<std::size_t> layers;
  if (!cfg.serial_layers.empty()) {
    layers = cfg.serial_layers;
    if (layers.size() != L) throw PreconditionError("serial: one layer size per criterion required");
    if (layers.back() != n) throw PreconditionError("serial: the last layer must select N samples");
    for (std::size_t k = 1; k < L; ++k) {
      if (!(layers[k] < layers[k - 1])) throw PreconditionError("serial: layer sizes must strictly decrease");
    }
  } else {
    layers.resize(L);
    for (std::size_t k = 1; k <= L; ++k) {
      const double size = std::ceil(static_cast<double>(pool_size) *
                                    std::pow(0.1, static_cast<double>(k) / static_cast<double>(L)));
      layers[k - 1] = std::max(n, static_cast<std::size_t>(size));
    }
    layers.back() = n;
    for (std::size_t k = L - 1; k-- > 0;) layers[k] = std::max(layers[k], layers[k + 1] + 1);
  }
  for (auto& s : layers) {
    if (s > pool_size) {
      warn(warnings, "serial: layer size " + std::to_string(s) + " clamped to pool size " + std::to_string(pool_size));
      s = pool_size;
    }
  }
  return layers;
}

std::vector<std::size_t> serial_select(const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                                       const TedCache* ted, std::vector<std::string>* warnings) {
  const auto& u = pool.unlabeled;
  const auto layers = serial_layers(cfg, u.size(), warnings);
  std::vector<std::size_t> survivors(u.size());  // positions in u, ascending
  std::iota(survivors.begin(), survivors.end(), std::size_t{0});
  for (std::size_t k = 0; k < cfg.criteria.size(); ++k) {
    const ScoreList s = compute_scores(cfg.criteria[k], data, pool, cfg, ted, pool.iteration);
    std::vector<double> sub;
    sub.reserve(survivors.size());
    for (std::size_t pos : survivors) sub.push_back(s.values[pos]);
    std::vector<std::size_t> keep;
    for (std::size_t j : lowest(sub, layers[k])) keep.push_back(survivors[j]);
    survivors = std::move(keep);
  }
  std::vector<std::size_t> batch;
  for (std::size_t pos : survivors) batch.push_back(u[pos]);
  return batch;
}

std::vector<std::size_t> parallel_select(const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                                         const TedCache* ted) {
  const auto& u = pool.unlabeled;
  const std::size_t L = cfg.criteria.size();
  std::vector<double> w = cfg.parallel_weights.empty() ? std::vector<double>(L, 1.0) : cfg.parallel_weights;
  if (w.size() != L) throw PreconditionError("parallel: one weight per criterion required");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw PreconditionError("parallel: weights must be non-negative");
    sum += v;
  }
  if (!(sum > 0.0)) throw PreconditionError("parallel: weights are all zero");

  std::vector<double> combined(u.size(), 0.0);
  for (std::size_t k = 0; k < L; ++k) {
    if (w[k] == 0.0) continue;
    const auto [ns, ranks] = normalize_and_rank(compute_scores(cfg.criteria[k], data, pool, cfg, ted, pool.iteration));
    for (std::size_t i = 0; i < u.size(); ++i) combined[i] += w[k] * ns.values[i];
  }
  std::vector<std::size_t> batch;
  for (std::size_t pos : lowest(combined, cfg.batch_size)) batch.push_back(u[pos]);
  return batch;
}

CheckpointRecord evaluate_checkpoint(const Dataset& data, const PoolState& pool, const Dataset& test,
                                     const LearnerConfig& learner, double fraction) {
  CheckpointRecord rec;
  rec.fraction = fraction;
  rec.n_labeled = pool.labeled.size();
  const Model m = fit(learner, data.rows(pool.labeled), pool.labeled_labels);
  const Eigen::VectorXd p = m.positive_posteriors(test.features);
  std::vector<int> predicted(test.size());
  std::vector<double> scores(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    scores[i] = p(static_cast<Eigen::Index>(i));
    predicted[i] = make_prediction(scores[i]).y_max;
  }
  rec.accuracy = accuracy(predicted, test.labels);
  rec.f1 = f1_score(predicted, test.labels);
  try {
    rec.auc = auc(scores, test.labels);
  } catch (const DomainError&) {
    rec.auc = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

RunTrace run_rmqcal(const Problem& problem, const ALConfig& cfg) {
  cfg.validate();
  const auto ted = maybe_ted(problem, cfg);
  const TedCache* cache = ted ? &*ted : nullptr;
  return drive(problem, cfg, "rmqcal", cache, [&](const PoolState& pool, std::size_t, std::vector<std::string>*) {
    StepResult r = rmqcal_select(*problem.data, pool, cfg, cache);
    IterationRecord rec;
    rec.selected = std::move(r.batch);
    rec.weights = std::move(r.weights.weights);
    return rec;
  });
}

RunTrace run_serial(const Problem& problem, const ALConfig& cfg) {
  cfg.validate();
  const auto ted = maybe_ted(problem, cfg);
  const TedCache* cache = ted ? &*ted : nullptr;
  return drive(problem, cfg, "serial", cache, [&](const PoolState& pool, std::size_t, std::vector<std::string>* w) {
    IterationRecord rec;
    rec.selected = serial_select(*problem.data, pool, cfg, cache, w);
    return rec;
  });
}

RunTrace run_parallel(const Problem& problem, const ALConfig& cfg) {
  cfg.validate();
  const auto ted = maybe_ted(problem, cfg);
  const TedCache* cache = ted ? &*ted : nullptr;
  std::vector<double> fixed = cfg.parallel_weights.empty() ? std::vector<double>(cfg.criteria.size(), 1.0)
                                                           : cfg.parallel_weights;
  const double sum = std::accumulate(fixed.begin(), fixed.end(), 0.0);
  if (sum > 0.0) {
    for (double& v : fixed) v /= sum;
  }
  return drive(problem, cfg, "parallel", cache, [&](const PoolState& pool, std::size_t, std::vector<std::string>*) {
    IterationRecord rec;
    rec.selected = parallel_select(*problem.data, pool, cfg, cache);
    rec.weights = fixed;
    return rec;
  });
}

RunTrace run_random(const Problem& problem, const ALConfig& cfg) {
  cfg.validate();
  const auto ted = cfg.initial_batch == InitialBatch::ted ? std::optional<TedCache>(TedCache(*problem.data, problem.pool, cfg.ted))
                                                          : std::nullopt;
  Rng rng = Rng::derive(cfg.seed, kStreamRandomBaseline);
  RunTrace trace = drive(problem, cfg, "random", ted ? &*ted : nullptr,
                         [&](const PoolState& pool, std::size_t, std::vector<std::string>*) {
                           IterationRecord rec;
                           rec.selected = rng.sample(pool.unlabeled, std::min(cfg.batch_size, pool.unlabeled.size()));
                           return rec;
                         });
  trace.criteria.clear();
  return trace;
}

RunTrace run_rmqcal(const Dataset& data, const ALConfig& cfg) {
  return run_rmqcal(make_problem(data, cfg.test_fraction, cfg.seed), cfg);
}
RunTrace run_serial(const Dataset& data, const ALConfig& cfg) {
  return run_serial(make_problem(data, cfg.test_fraction, cfg.seed), cfg);
}
RunTrace run_parallel(const Dataset& data, const ALConfig& cfg) {
  return run_parallel(make_problem(data, cfg.test_fraction, cfg.seed), cfg);
}
RunTrace run_random(const Dataset& data, const ALConfig& cfg) {
  return run_random(make_problem(data, cfg.test_fraction, cfg.seed), cfg);
}

}  // namespace rmqcal
