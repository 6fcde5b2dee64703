#include "rmqcal/aggregation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rmqcal/error.hpp"

namespace rmqcal {

namespace {

constexpr double kMajorityEps = 1e-12;

std::size_t check_lists(const std::vector<RankList>& lists, std::span<const double> weights) {
  if (lists.empty()) throw PreconditionError("aggregation: no rank lists");
  if (weights.size() != lists.size()) throw PreconditionError("aggregation: one weight per list required");
  const std::size_t n = lists.front().size();
  for (const auto& l : lists) {
    if (l.size() != n) throw PreconditionError("aggregation: rank lists cover different sample sets");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw PreconditionError("aggregation: weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw PreconditionError("aggregation: weights are all zero");
  return n;
}

std::vector<double> normalized(std::span<const double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= sum;
  return out;
}

// Orders ids by ascending key, ties by id.
AggregatedRanking order_ascending(const std::vector<double>& key) {
  AggregatedRanking out;
  out.order.resize(key.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  out.scores.reserve(key.size());
  for (std::size_t i : out.order) out.scores.push_back(key[i]);
  out.candidate_count = key.size();
  return out;
}

// Rounds to 12 significant digits.
double snap(double f) {
  if (f == 0.0 || !std::isfinite(f)) return f;
  const double scale = std::pow(10.0, 11.0 - std::floor(std::log10(std::abs(f))));
  return std::round(f * scale) / scale;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<std::size_t> AggregatedRanking::top(std::size_t n) const {
  return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(n, order.size()))};
}

RankList AggregatedRanking::positions() const {
  RankList r;
  r.ranks.assign(order.size(), 0);
  for (std::size_t p = 0; p < order.size(); ++p) r.ranks.at(order[p]) = static_cast<int>(p) + 1;
  return r;
}

AggregatedRanking borda_aggregate(const std::vector<RankList>& lists, std::span<const double> weights,
                                  const BordaConfig& config) {
  const std::size_t n = check_lists(lists, weights);
  if (config.fusion == BordaFusion::p_norm && !(config.p >= 1.0)) {
    throw PreconditionError("borda: p must be >= 1");
  }
  const std::size_t L = lists.size();

  std::vector<std::vector<int>> points(L);
  for (std::size_t k = 0; k < L; ++k) {
    points[k] = config.input == BordaInput::positional ? ordinal_positions(lists[k]) : lists[k].ranks;
  }

  bool flagged = false;
  std::vector<double> fused(n, 0.0);
  std::vector<double> column;
  column.reserve(L);
  for (std::size_t i = 0; i < n; ++i) {
    column.clear();
    switch (config.fusion) {
      case BordaFusion::p_norm: {
        double s = 0.0;
        for (std::size_t k = 0; k < L; ++k) s += std::pow(points[k][i] * weights[k], config.p);
        fused[i] = s;
        break;
      }
      case BordaFusion::minimum:
      case BordaFusion::median: {
        for (std::size_t k = 0; k < L; ++k) {
          if (weights[k] > 0.0) column.push_back(points[k][i] * weights[k]);
        }
        fused[i] = config.fusion == BordaFusion::minimum ? *std::min_element(column.begin(), column.end())
                                                         : median_of(column);
        break;
      }
      case BordaFusion::geometric_mean: {
        double log_sum = 0.0;
        for (std::size_t k = 0; k < L; ++k) {
          double w = weights[k];
          if (w <= 0.0) {
            w = kGeometricWeightFloor;
            flagged = true;
          }
          log_sum += std::log(points[k][i] * w);
        }
        fused[i] = std::exp(log_sum / static_cast<double>(L));
        break;
      }
    }
  }
  // Exact ties in fused score must not depend on summation rounding.
  for (double& f : fused) f = snap(f);
  AggregatedRanking out = order_ascending(fused);
  out.flagged = flagged;
  return out;
}

AggregatedRanking bucklin_aggregate(const std::vector<RankList>& lists, std::span<const double> raw_weights,
                                    std::size_t count) {
  const std::size_t n = check_lists(lists, raw_weights);
  const std::vector<double> weights = normalized(raw_weights);
  if (count == 0 || count > n) count = n;

  std::vector<std::vector<std::size_t>> prefs;
  prefs.reserve(lists.size());
  for (const auto& l : lists) prefs.push_back(preference_order(l));

  std::vector<double> tally(n, 0.0);
  std::vector<bool> emitted(n, false);
  AggregatedRanking out;
  std::vector<std::size_t> winners;
  for (std::size_t level = 1; out.order.size() < count; ++level) {
    if (level > n) throw std::logic_error("bucklin: no majority after exhausting every level");
    for (std::size_t k = 0; k < prefs.size(); ++k) tally[prefs[k][level - 1]] += weights[k];
    winners.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!emitted[i] && tally[i] > 0.5 + kMajorityEps) winners.push_back(i);
    }
    std::stable_sort(winners.begin(), winners.end(),
                     [&](std::size_t a, std::size_t b) { return tally[a] > tally[b] + kMajorityEps; });
    for (std::size_t i : winners) {
      if (out.order.size() == count) break;
      emitted[i] = true;
      out.order.push_back(i);
      out.scores.push_back(static_cast<double>(level));
    }
  }
  out.candidate_count = out.order.size();
  // Unconfirmed samples follow by accumulated support, then id.
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!emitted[i]) rest.push_back(i);
  }
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return tally[a] > tally[b] + kMajorityEps; });
  const double tail_level = static_cast<double>(n + 1);
  for (std::size_t i : rest) {
    out.order.push_back(i);
    out.scores.push_back(tail_level);
  }
  return out;
}

std::int64_t kendall_distance(const RankList& a, const RankList& b) {
  if (a.size() != b.size()) throw PreconditionError("kendall: lists differ in length");
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const long long da = a.ranks[i] - a.ranks[j];
      const long long db = b.ranks[i] - b.ranks[j];
      if (da * db < 0) ++d;
    }
  }
  return d;
}

std::int64_t spearman_distance(const RankList& a, const RankList& b) {
  if (a.size() != b.size()) throw PreconditionError("spearman: lists differ in length");
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(static_cast<std::int64_t>(a.ranks[i]) - b.ranks[i]);
  return d;
}

RankDistance total_distance(const RankList& aggregate, const std::vector<RankList>& lists) {
  RankDistance d;
  for (const auto& l : lists) {
    d.kendall += kendall_distance(aggregate, l);
    d.spearman += spearman_distance(aggregate, l);
  }
  return d;
}

double weighted_kendall_objective(const RankList& candidate, const std::vector<RankList>& lists,
                                  std::span<const double> weights) {
  if (weights.size() != lists.size()) throw PreconditionError("objective: one weight per list required");
  double s = 0.0;
  for (std::size_t k = 0; k < lists.size(); ++k) s += weights[k] * static_cast<double>(kendall_distance(candidate, lists[k]));
  return s / static_cast<double>(lists.size());
}

AggregatedRanking brute_force_aggregate(const std::vector<RankList>& lists, std::span<const double> weights) {
  const std::size_t n = check_lists(lists, weights);
  if (n > kBruteForceLimit) {
    throw DomainError("brute force aggregation refuses " + std::to_string(n) + " > " +
                      std::to_string(kBruteForceLimit) + " samples");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  double best_value = std::numeric_limits<double>::infinity();
  RankList candidate;
  candidate.ranks.resize(n);
  do {
    for (std::size_t p = 0; p < n; ++p) candidate.ranks[perm[p]] = static_cast<int>(p) + 1;
    const double v = weighted_kendall_objective(candidate, lists, weights);
    if (v < best_value) {
      best_value = v;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  AggregatedRanking out;
  out.order = best;
  out.scores.assign(n, best_value);
  out.candidate_count = n;
  return out;
}

namespace {

constexpr std::array<AggregatorKind, 8> kAllAggregators = {
    AggregatorKind::borda_min, AggregatorKind::borda_median, AggregatorKind::borda_pnorm, AggregatorKind::borda_geo,
    AggregatorKind::bucklin,   AggregatorKind::mc1,          AggregatorKind::mc2,         AggregatorKind::mc3};

}  // namespace

std::string_view to_string(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::borda_min: return "borda-min";
    case AggregatorKind::borda_median: return "borda-median";
    case AggregatorKind::borda_geo: return "borda-geo";
    case AggregatorKind::borda_pnorm: return "borda-pnorm";
    case AggregatorKind::bucklin: return "bucklin";
    case AggregatorKind::mc1: return "mc1";
    case AggregatorKind::mc2: return "mc2";
    case AggregatorKind::mc3: return "mc3";
  }
  return "unknown";
}

std::optional<AggregatorKind> parse_aggregator(std::string_view text) {
  for (auto k : kAllAggregators) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::span<const AggregatorKind> all_aggregators() { return kAllAggregators; }

AggregatedRanking aggregate(AggregatorKind kind, const std::vector<RankList>& lists, std::span<const double> weights,
                            const std::vector<bool>& committee, std::size_t batch, std::size_t count,
                            const AggregatorOptions& options) {
  BordaConfig borda;
  borda.p = options.p;
  borda.input = options.borda_input;
  MarkovOptions markov;
  markov.tun1 = options.tun1;
  markov.tun2 = options.tun2;
  markov.truncate = options.truncate;
  switch (kind) {
    case AggregatorKind::borda_min:
      borda.fusion = BordaFusion::minimum;
      return borda_aggregate(lists, weights, borda);
    case AggregatorKind::borda_median:
      borda.fusion = BordaFusion::median;
      return borda_aggregate(lists, weights, borda);
    case AggregatorKind::borda_geo:
      borda.fusion = BordaFusion::geometric_mean;
      return borda_aggregate(lists, weights, borda);
    case AggregatorKind::borda_pnorm:
      borda.fusion = BordaFusion::p_norm;
      return borda_aggregate(lists, weights, borda);
    case AggregatorKind::bucklin:
      return bucklin_aggregate(lists, weights, count);
    case AggregatorKind::mc1:
      markov.variant = MarkovVariant::mc1;
      return markov_aggregate(lists, weights, committee, batch, markov);
    case AggregatorKind::mc2:
      markov.variant = MarkovVariant::mc2;
      return markov_aggregate(lists, weights, committee, batch, markov);
    case AggregatorKind::mc3:
      markov.variant = MarkovVariant::mc3;
      return markov_aggregate(lists, weights, committee, batch, markov);
  }
  throw PreconditionError("unknown aggregator");
}

}  // namespace rmqcal
