#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmqcal/aggregation.hpp"
#include "rmqcal/criteria.hpp"
#include "rmqcal/dataset.hpp"
#include "rmqcal/learner.hpp"
#include "rmqcal/weighting.hpp"

namespace rmqcal {

enum class InitialBatch { ted, random };

std::string_view to_string(InitialBatch b);

struct ALConfig {
  std::vector<CriterionName> criteria = {CriterionName::diversity, CriterionName::margin, CriterionName::qbc};
  AggregatorKind aggregator = AggregatorKind::mc2;
  AggregatorOptions aggregation;
  std::size_t batch_size = 1;
  InitialBatch initial_batch = InitialBatch::ted;
  std::size_t initial_size = 4;
  std::size_t max_topup = 10;
  double budget = 0.3;  // stop once this fraction of the pool is labeled
  std::vector<double> checkpoints = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  std::size_t committee_size = 5;
  LearnerConfig learner;
  TedOptions ted;
  DiversityReduce diversity_reduce = DiversityReduce::max;
  double test_fraction = 0.5;
  std::uint64_t seed = 0;

  std::vector<std::size_t> serial_layers;  // run_serial; empty selects the default schedule
  std::vector<double> parallel_weights;    // run_parallel; empty selects uniform weights

  void validate() const;
};

/// The data, its held-out test part and the initial (fully unlabeled) pool.
struct Problem {
  const Dataset* data = nullptr;
  Dataset test;
  PoolState pool;
};

Problem make_problem(const Dataset& data, double test_fraction, std::uint64_t seed);

struct IterationRecord {
  std::size_t t = 0;
  std::vector<std::size_t> selected;  // dataset row indices
  std::vector<double> weights;        // per criterion; empty for baselines without weights
  std::size_t n_labeled = 0;
};

struct CheckpointRecord {
  double fraction = 0.0;
  std::size_t n_labeled = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
};

struct RunTrace {
  std::string method;
  std::vector<std::string> criteria;
  std::vector<IterationRecord> iterations;
  std::vector<CheckpointRecord> checkpoints;
  std::vector<std::string> warnings;
  PoolState final_pool;
};

/// TED scores of the initial pool, solved once per run.
class TedCache {
public:
  TedCache(const Dataset& data, const PoolState& initial_pool, const TedOptions& options);

  /// Cached score of dataset row `index`; throws if it was not in the initial pool.
  double score(std::size_t index) const;
  ScoreList restrict_to(const std::vector<std::size_t>& unlabeled) const;
  bool flagged() const { return flagged_; }

private:
  std::map<std::size_t, double> scores_;
  bool flagged_ = false;
};

/// Scores of one criterion over the current unlabeled pool (pool order).
/// `t` seeds the committee and the random criterion.
ScoreList compute_scores(CriterionName criterion, const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                         const TedCache* ted, std::size_t t);

/// Labels the first batch: best TED scores or uniform random, then random
/// top-up (at most cfg.max_topup draws) until both classes are present.
PoolState initial_batch(const Dataset& data, const PoolState& pool, const ALConfig& cfg, const TedCache* ted,
                        std::vector<std::string>* warnings = nullptr);

struct StepResult {
  std::vector<std::size_t> batch;  // dataset row indices
  WeightVector weights;
  AggregatedRanking ranking;       // over positions in pool.unlabeled
  std::vector<ScoreList> scores;
  std::vector<RankList> ranks;
};

/// Scores, weights and aggregates the configured criteria and returns the top-N batch.
StepResult rmqcal_select(const Dataset& data, const PoolState& pool, const ALConfig& cfg, const TedCache* ted);

/// rmqcal_select followed by the oracle.
std::pair<PoolState, StepResult> rmqcal_step(const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                                             const TedCache* ted);

/// Serial layer sizes N_1 > ... > N_L = N for an unlabeled pool of `pool_size`.
std::vector<std::size_t> serial_layers(const ALConfig& cfg, std::size_t pool_size,
                                       std::vector<std::string>* warnings = nullptr);

std::vector<std::size_t> serial_select(const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                                       const TedCache* ted, std::vector<std::string>* warnings = nullptr);
std::vector<std::size_t> parallel_select(const Dataset& data, const PoolState& pool, const ALConfig& cfg,
                                         const TedCache* ted);

CheckpointRecord evaluate_checkpoint(const Dataset& data, const PoolState& pool, const Dataset& test,
                                     const LearnerConfig& learner, double fraction);

RunTrace run_rmqcal(const Problem& problem, const ALConfig& cfg);
RunTrace run_serial(const Problem& problem, const ALConfig& cfg);
RunTrace run_parallel(const Problem& problem, const ALConfig& cfg);
RunTrace run_random(const Problem& problem, const ALConfig& cfg);

/// Convenience overloads that split `data` with (cfg.test_fraction, cfg.seed).
RunTrace run_rmqcal(const Dataset& data, const ALConfig& cfg);
RunTrace run_serial(const Dataset& data, const ALConfig& cfg);
RunTrace run_parallel(const Dataset& data, const ALConfig& cfg);
RunTrace run_random(const Dataset& data, const ALConfig& cfg);

}  // namespace rmqcal
