#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "rmqcal/aggregation.hpp"
#include "rmqcal/error.hpp"

namespace rmqcal {

namespace {

constexpr double kThresholdEps = 1e-12;
constexpr int kMaxPowerIterations = 10000;
constexpr double kPowerStepTol = 1e-13;
constexpr double kResidualTol = 1e-10;

std::vector<double> normalized_weights(const std::vector<RankList>& lists, std::span<const double> weights) {
  if (lists.empty()) throw PreconditionError("markov: no rank lists");
  if (weights.size() != lists.size()) throw PreconditionError("markov: one weight per list required");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw PreconditionError("markov: weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw PreconditionError("markov: weights are all zero");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= sum;
  return out;
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

CandidateSet truncate_candidates(const std::vector<RankList>& lists, const std::vector<bool>& committee,
                                 std::size_t batch, std::size_t tun2) {
  if (lists.empty()) throw PreconditionError("truncate: no rank lists");
  if (committee.size() != lists.size()) throw PreconditionError("truncate: one committee flag per list required");
  const std::size_t n = lists.front().size();
  CandidateSet c;
  c.n_star = batch + tun2;
  c.tun2 = tun2;
  const bool any_voter = std::find(committee.begin(), committee.end(), false) != committee.end();
  if (!any_voter) {
    // no list is allowed to define the candidate set; keep everyone
    c.truncated = false;
    c.indices.resize(n);
    std::iota(c.indices.begin(), c.indices.end(), std::size_t{0});
    return c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < lists.size(); ++k) {
      if (!committee[k] && lists[k].ranks[i] <= static_cast<int>(c.n_star)) {
        c.indices.push_back(i);
        break;
      }
    }
  }
  return c;
}

TransitionMatrix build_transition(const std::vector<RankList>& lists, std::span<const double> raw_weights,
                                  std::span<const std::size_t> candidates, MarkovVariant variant, double tun1) {
  const std::vector<double> w = normalized_weights(lists, raw_weights);
  const auto m = static_cast<Eigen::Index>(candidates.size());
  if (m < 2) throw PreconditionError("markov: need at least two candidates");
  if (!(tun1 > 0.0 && tun1 < 1.0)) throw PreconditionError("markov: tun1 must lie in (0, 1)");
  const double inv = 1.0 / static_cast<double>(m);

  TransitionMatrix t;
  t.variant = variant;
  t.tun1 = tun1;
  t.entries = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const std::size_t i = candidates[static_cast<std::size_t>(a)];
    double off = 0.0;
    for (Eigen::Index b = 0; b < m; ++b) {
      if (a == b) continue;
      const std::size_t j = candidates[static_cast<std::size_t>(b)];
      // weight of the lists that rank j strictly ahead of i
      double support = 0.0;
      for (std::size_t k = 0; k < lists.size(); ++k) {
        if (lists[k].ranks.at(i) > lists[k].ranks.at(j)) support += w[k];
      }
      double v = 0.0;
      switch (variant) {
        case MarkovVariant::mc1: v = support > 0.0 ? 1.0 : 0.0; break;
        case MarkovVariant::mc2: v = support > 0.5 + kThresholdEps ? 1.0 : 0.0; break;
        case MarkovVariant::mc3: v = support; break;
      }
      t.entries(a, b) = v * inv;
      off += t.entries(a, b);
    }
    t.entries(a, a) = 1.0 - off;
  }
  t.entries = t.entries * (1.0 - tun1) + Eigen::MatrixXd::Constant(m, m, tun1 * inv);
  // re-balance the diagonal so each row sums to 1 to the last bit
  for (Eigen::Index a = 0; a < m; ++a) {
    const double rest = t.entries.row(a).sum() - t.entries(a, a);
    t.entries(a, a) = 1.0 - rest;
  }
  return t;
}

Eigen::VectorXd stationary_distribution(const TransitionMatrix& matrix) {
  const Eigen::MatrixXd& t = matrix.entries;
  const Eigen::Index n = t.rows();
  if (n == 0 || t.cols() != n) throw PreconditionError("stationary: matrix must be square and non-empty");
  const Eigen::MatrixXd tt = t.transpose();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < kMaxPowerIterations; ++iter) {
    Eigen::VectorXd next = tt * pi;
    next /= next.sum();
    const double step = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (step < kPowerStepTol) break;
  }
  const double residual = (tt * pi - pi).lpNorm<1>();
  if (!(residual < kResidualTol)) {
    throw ConvergenceError("stationary: power iteration did not converge (residual " + std::to_string(residual) + ")");
  }
  return pi;
}

AggregatedRanking markov_aggregate(const std::vector<RankList>& lists, std::span<const double> weights,
                                   const std::vector<bool>& committee, std::size_t batch,
                                   const MarkovOptions& options) {
  if (lists.empty()) throw PreconditionError("markov: no rank lists");
  const std::size_t n = lists.front().size();
  for (const auto& l : lists) {
    if (l.size() != n) throw PreconditionError("markov: rank lists cover different sample sets");
  }
  CandidateSet cands;
  if (options.truncate) {
    cands = truncate_candidates(lists, committee, batch, options.tun2);
  } else {
    cands.indices.resize(n);
    std::iota(cands.indices.begin(), cands.indices.end(), std::size_t{0});
    cands.truncated = false;
  }

  AggregatedRanking out;
  out.flagged = options.truncate && !cands.truncated;
  std::vector<double> pi_of(cands.indices.size(), 1.0);
  if (cands.indices.size() >= 2) {
    const TransitionMatrix t = build_transition(lists, weights, cands.indices, options.variant, options.tun1);
    const Eigen::VectorXd pi = stationary_distribution(t);

    // Samples with identical rank profiles are exchangeable in the chain;
    // give them the exact same score so id order decides between them.
    std::map<std::vector<int>, std::vector<std::size_t>> groups;
    for (std::size_t a = 0; a < cands.indices.size(); ++a) {
      std::vector<int> profile;
      profile.reserve(lists.size());
      for (const auto& l : lists) profile.push_back(l.ranks[cands.indices[a]]);
      groups[profile].push_back(a);
    }
    for (const auto& [profile, members] : groups) {
      double mean = 0.0;
      for (std::size_t a : members) mean += pi(static_cast<Eigen::Index>(a));
      mean /= static_cast<double>(members.size());
      for (std::size_t a : members) pi_of[a] = round12(mean);
    }
  }

  std::vector<std::size_t> local(cands.indices.size());
  std::iota(local.begin(), local.end(), std::size_t{0});
  std::stable_sort(local.begin(), local.end(), [&](std::size_t a, std::size_t b) { return pi_of[a] > pi_of[b]; });
  for (std::size_t a : local) {
    out.order.push_back(cands.indices[a]);
    out.scores.push_back(pi_of[a]);
  }
  out.candidate_count = out.order.size();
  if (options.full_list && out.order.size() < n) {
    std::vector<bool> in(n, false);
    for (std::size_t i : cands.indices) in[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i]) {
        out.order.push_back(i);
        out.scores.push_back(0.0);
      }
    }
  }
  return out;
}

}  // namespace rmqcal
