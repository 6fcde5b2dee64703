// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rmqcal/aggregation.hpp"
#include "rmqcal/criteria.hpp"
#include "rmqcal/dataset.hpp"
#include "rmqcal/eval.hpp"
#include "rmqcal/loop.hpp"
#include "rmqcal/random.hpp"
#include "rmqcal/weighting.hpp"
#include "table2.hpp"

namespace fs = std::filesystem;
using namespace rmqcal;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryResidualTol = 1e-8;
constexpr double kPiSumTol = 1e-12;
constexpr double kStochasticSuiteLimitS = 5.0;
constexpr int kStochasticInstances = 200;
constexpr int kWeightInstances = 1000;
constexpr double kWeightSumTol = 1e-12;
constexpr int kIdentityInstances = 50;
constexpr int kBruteForceInstances = 100;
constexpr int kBruteForceRequired = 95;
constexpr double kTrendMargin = 0.01;
constexpr int kTrendStrictRequired = 2;
constexpr double kTrendWinTieShare = 0.80;
constexpr double kTrendLimitS = 300.0;
constexpr std::size_t kTruncationPool = 5000;
constexpr double kTruncationLimitMs = 100.0;

int failures = 0;

void report(const std::string& criterion, bool passed, const std::string& detail) {
  std::printf("%s %s %s\n", passed ? "PASS" : "FAIL", criterion.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RankList random_permutation_ranks(Rng& rng, std::size_t n) {
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  rng.shuffle(ranks);
  return RankList{ranks};
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform01() + 1e-3);
  for (double& x : w) x /= total;
  return w;
}

ScoreList random_scores(Rng& rng, CriterionName name, std::size_t n, bool coarse) {
  ScoreList s;
  s.criterion = name;
  s.values.resize(n);
  for (double& v : s.values) v = coarse ? std::floor(rng.uniform01() * 8.0) : rng.uniform01();
  return s;
}

// ---------------------------------------------------------------------------

void table2() {
  double elapsed = 0.0;
  const auto columns = cli::run_toy(&elapsed);
  const auto checks = cli::check_toy(columns, elapsed);
  for (const char* criterion : {"AC1", "AC2"}) {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : checks) {
      if (c.criterion != criterion) continue;
      ok = ok && c.passed;
      if (!c.passed) detail << "[" << c.name << ": " << c.detail << "] ";
    }
    if (ok) detail << "all toy-example checks within tolerance";
    report(criterion, ok, detail.str());
    for (const auto& c : checks) {
      if (c.criterion == criterion) std::printf("  %s %s: %s\n", c.passed ? "ok  " : "fail", c.name.c_str(), c.detail.c_str());
    }
  }
}

void weighting_laws() {
  bool ok = true;
  std::ostringstream detail;

  const std::vector<double> raw{0.37, 0.02};
  const WeightVector pair = blend_weights(raw, {false, true});
  const bool equal = pair.weights == std::vector<double>{0.5, 0.5};
  if (!equal) detail << "[one committee pair not (0.5, 0.5)] ";
  ok = ok && equal;

  Rng rng(31);
  const std::vector<CriterionName> pool_names{CriterionName::margin, CriterionName::diversity, CriterionName::qbc,
                                              CriterionName::ted};
  int violations = 0;
  for (int k = 0; k < kWeightInstances; ++k) {
    const std::size_t n = 3 + rng.uniform_index(40);
    const std::size_t criteria = 1 + rng.uniform_index(4);
    const std::size_t batch = 1 + rng.uniform_index(n - 1);
    std::vector<CriterionName> kinds;
    std::vector<NormalizedScoreList> lists;
    for (std::size_t c = 0; c < criteria; ++c) {
      kinds.push_back(pool_names[rng.uniform_index(pool_names.size())]);
      lists.push_back(normalize_and_rank(random_scores(rng, kinds.back(), n, rng.uniform01() < 0.3)).first);
    }
    const WeightVector w = compute_weights(lists, kinds, batch);
    const double total = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    double committee_mass = 0.0;
    std::size_t c2 = 0;
    for (std::size_t c = 0; c < criteria; ++c) {
      if (is_committee(kinds[c])) {
        committee_mass += w.weights[c];
        ++c2;
      }
    }
    const double expected = static_cast<double>(c2) / static_cast<double>(criteria);
    if (std::abs(total - 1.0) > kWeightSumTol || std::abs(committee_mass - expected) > kWeightSumTol) ++violations;
  }
  if (violations) detail << "[" << violations << " of " << kWeightInstances << " instances break sum/group mass] ";
  ok = ok && violations == 0;

  ScoreList step;
  step.criterion = CriterionName::margin;
  step.values = {0.0, 0.0, 1.0, 1.0, 1.0};
  const WeightVector ideal = compute_weights({normalize_and_rank(step).first}, {CriterionName::margin}, 2);
  const bool unit = ideal.raw[0] == 1.0 && ideal.weights[0] == 1.0;
  if (!unit) detail << "[step list raw weight " << ideal.raw[0] << "] ";
  ok = ok && unit;

  if (ok) detail << "equal split exact; " << kWeightInstances << " random instances obey sum and group mass; step list w1 = 1";
  report("AC3", ok, detail.str());
}

void stochastic_suite() {
  Rng rng(47);
  const auto start = Clock::now();
  int bad_rows = 0, bad_floor = 0, bad_residual = 0, bad_sum = 0;
  double worst_residual = 0.0;
  const MarkovVariant variants[] = {MarkovVariant::mc1, MarkovVariant::mc2, MarkovVariant::mc3};
  for (int k = 0; k < kStochasticInstances; ++k) {
    const std::size_t n = 2 + rng.uniform_index(19);
    const std::size_t lists_count = 1 + rng.uniform_index(5);
    std::vector<RankList> lists;
    for (std::size_t l = 0; l < lists_count; ++l) {
      ScoreList s = random_scores(rng, CriterionName::margin, n, rng.uniform01() < 0.3);
      lists.push_back(competition_ranks(s.values));
    }
    const auto weights = random_weights(rng, lists_count);
    std::vector<std::size_t> candidates(n);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    const MarkovVariant variant = variants[k % 3];
    const double tun1 = 0.01 + 0.2 * rng.uniform01();
    const TransitionMatrix t = build_transition(lists, weights, candidates, variant, tun1);
    const double floor = tun1 / static_cast<double>(n);
    for (Eigen::Index i = 0; i < t.entries.rows(); ++i) {
      if (std::abs(t.entries.row(i).sum() - 1.0) > kRowSumTol) ++bad_rows;
    }
    if (t.entries.minCoeff() < floor * (1.0 - 1e-12)) ++bad_floor;
    const Eigen::VectorXd pi = stationary_distribution(t);
    const double residual = (t.entries.transpose() * pi - pi).lpNorm<1>();
    worst_residual = std::max(worst_residual, residual);
    if (residual >= kStationaryResidualTol) ++bad_residual;
    if (std::abs(pi.sum() - 1.0) > kPiSumTol) ++bad_sum;
  }
  const double elapsed = seconds_since(start);
  const bool ok = bad_rows == 0 && bad_floor == 0 && bad_residual == 0 && bad_sum == 0 && elapsed < kStochasticSuiteLimitS;
  std::ostringstream detail;
  detail << kStochasticInstances << " instances: row-sum violations " << bad_rows << ", floor violations " << bad_floor
         << ", residual violations " << bad_residual << " (worst " << worst_residual << "), pi-sum violations " << bad_sum
         << ", runtime " << elapsed << " s";
  report("AC4", ok, detail.str());
}

void single_criterion_identity() {
  Rng rng(53);
  int mismatches = 0;
  for (int k = 0; k < kIdentityInstances; ++k) {
    const std::size_t n = 8 + rng.uniform_index(60);
    const std::size_t batch = 1 + rng.uniform_index(5);
    const CriterionName name = k % 2 ? CriterionName::margin : CriterionName::qbc;
    const auto [normalized, ranks] = normalize_and_rank(random_scores(rng, name, n, k % 3 == 0));
    std::vector<std::size_t> expected(normalized.sort_order.begin(), normalized.sort_order.begin() + batch);
    const std::vector<double> weights{1.0};
    for (AggregatorKind kind : all_aggregators()) {
      const auto agg = aggregate(kind, {ranks}, weights, {is_committee(name)}, batch, batch);
      if (agg.top(batch) != expected) ++mismatches;
    }
  }
  std::ostringstream detail;
  detail << mismatches << " mismatches over " << kIdentityInstances << " instances x " << all_aggregators().size()
         << " aggregators";
  report("AC5", mismatches == 0, detail.str());
}

void brute_force_sanity() {
  Rng rng(59);
  int better = 0;
  double ratio_sum = 0.0;
  int optimal = 0;
  for (int k = 0; k < kBruteForceInstances; ++k) {
    std::vector<RankList> lists;
    for (int l = 0; l < 3; ++l) lists.push_back(random_permutation_ranks(rng, 6));
    const auto weights = random_weights(rng, 3);
    MarkovOptions opts;
    opts.variant = MarkovVariant::mc2;
    opts.truncate = false;
    const auto mc2 = markov_aggregate(lists, weights, {false, false, false}, 1, opts);
    const double mc2_obj = weighted_kendall_objective(mc2.positions(), lists, weights);
    const double random_obj = weighted_kendall_objective(random_permutation_ranks(rng, 6), lists, weights);
    if (mc2_obj < random_obj) ++better;
    const auto best = brute_force_aggregate(lists, weights);
    const double best_obj = weighted_kendall_objective(best.positions(), lists, weights);
    if (mc2_obj <= best_obj + 1e-12) ++optimal;
    ratio_sum += best_obj > 0.0 ? mc2_obj / best_obj : 1.0;
  }
  std::ostringstream detail;
  detail << "MC2 beats a random permutation in " << better << "/" << kBruteForceInstances << " (need "
         << kBruteForceRequired << "); factorial optimum reached in " << optimal << ", mean objective ratio "
         << ratio_sum / kBruteForceInstances;
  report("AC6", better >= kBruteForceRequired, detail.str());
}

Dataset trend_dataset(std::string& name) {
  const fs::path data_dir = RMQCAL_DATA_DIR;
  fs::path path = data_dir / "wdbc.csv";
  if (!fs::exists(path)) path = data_dir / "two_blob_600.csv";
  name = path.filename().string();
  return normalize_features(load_table(path, TableFormat::dense_csv));
}

LearningCurve curve(const std::string& method, const std::vector<double>& checkpoints,
                    const std::vector<std::uint64_t>& seeds, const std::vector<RunTrace>& runs) {
  LearningCurve c;
  c.method = method;
  c.checkpoints = checkpoints;
  c.seeds = seeds;
  for (const auto& run : runs) {
    std::vector<double> row;
    for (const auto& cp : run.checkpoints) row.push_back(cp.accuracy);
    c.values.push_back(row);
  }
  return c;
}

void end_to_end_trend() {
  const auto start = Clock::now();
  std::string name;
  const Dataset data = trend_dataset(name);
  const std::vector<double> checkpoints{0.1, 0.2, 0.3};
  std::vector<std::uint64_t> seeds(10);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});

  ALConfig cfg;
  cfg.criteria = {CriterionName::diversity, CriterionName::margin, CriterionName::qbc};
  cfg.aggregator = AggregatorKind::mc2;
  cfg.batch_size = 1;
  cfg.budget = 0.3;
  cfg.checkpoints = checkpoints;
  cfg.test_fraction = 0.5;

  std::vector<RunTrace> rmq, rnd;
  for (std::uint64_t seed : seeds) {
    cfg.seed = seed;
    const Problem problem = make_problem(data, cfg.test_fraction, seed);
    rmq.push_back(run_rmqcal(problem, cfg));
    rnd.push_back(run_random(problem, cfg));
  }
  const LearningCurve a = curve("rmqcal", checkpoints, seeds, rmq);
  const LearningCurve b = curve("random", checkpoints, seeds, rnd);
  const CurvePair pair{&a, &b};
  const WinTieLossTable table = win_tie_loss(std::span<const CurvePair>(&pair, 1), 0.05);

  bool floor_ok = true;
  int strict = 0;
  std::ostringstream detail;
  detail << name << ": ";
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const auto ca = a.column(c), cb = b.column(c);
    const double ma = std::accumulate(ca.begin(), ca.end(), 0.0) / static_cast<double>(ca.size());
    const double mb = std::accumulate(cb.begin(), cb.end(), 0.0) / static_cast<double>(cb.size());
    floor_ok = floor_ok && ma >= mb - kTrendMargin;
    strict += ma > mb;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%g%% %.4f vs %.4f (%s); ", checkpoints[c] * 100.0, ma, mb,
                  std::string(to_string(table.verdicts[0][c])).c_str());
    detail << buf;
  }
  const WinTieLoss& t = table.totals;
  const double share = static_cast<double>(t.win + t.tie) / static_cast<double>(t.total());
  const double elapsed = seconds_since(start);
  detail << "W/T/L " << t.format() << ", runtime " << elapsed << " s";
  const bool ok = floor_ok && strict >= kTrendStrictRequired && share >= kTrendWinTieShare && elapsed < kTrendLimitS;
  report("AC7", ok, detail.str());
}

void truncation_efficiency() {
  Rng rng(61);
  std::vector<RankList> lists;
  for (int l = 0; l < 3; ++l) lists.push_back(competition_ranks(random_scores(rng, CriterionName::margin, kTruncationPool, false).values));
  const std::vector<double> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  MarkovOptions opts;
  opts.variant = MarkovVariant::mc2;
  opts.tun2 = 5;
  const std::size_t batch = 1;
  const auto start = Clock::now();
  const auto agg = markov_aggregate(lists, weights, {false, false, false}, batch, opts);
  const double elapsed_ms = seconds_since(start) * 1000.0;
  const std::size_t bound = 3 * (batch + opts.tun2);
  std::ostringstream detail;
  detail << "|U| = " << kTruncationPool << ": candidates " << agg.candidate_count << " (bound " << bound << "), runtime "
         << elapsed_ms << " ms";
  report("AC8", agg.candidate_count <= bound && elapsed_ms < kTruncationLimitMs, detail.str());
}

}  // namespace

int main() {
  table2();
  weighting_laws();
  stochastic_suite();
  single_criterion_identity();
  brute_force_sanity();
  end_to_end_trend();
  truncation_efficiency();
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
