#include "rmqcal/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rmqcal/error.hpp"
#include "rmqcal/random.hpp"

namespace rmqcal {

CriterionTag tag_of(CriterionName name) {
  switch (name) {
    case CriterionName::margin:
      return CriterionTag::certainty;
    case CriterionName::qbc:
      return CriterionTag::committee;
    case CriterionName::diversity:
    case CriterionName::ted:
    case CriterionName::random:
      return CriterionTag::representativeness;
  }
  return CriterionTag::representativeness;
}

std::string_view to_string(CriterionName name) {
  switch (name) {
    case CriterionName::margin: return "margin";
    case CriterionName::diversity: return "diversity";
    case CriterionName::qbc: return "qbc";
    case CriterionName::ted: return "ted";
    case CriterionName::random: return "random";
  }
  return "unknown";
}

std::string_view to_string(CriterionTag tag) {
  switch (tag) {
    case CriterionTag::certainty: return "certainty";
    case CriterionTag::committee: return "committee";
    case CriterionTag::representativeness: return "representativeness";
  }
  return "unknown";
}

std::optional<CriterionName> parse_criterion(std::string_view text) {
  for (auto c : {CriterionName::margin, CriterionName::diversity, CriterionName::qbc, CriterionName::ted,
                 CriterionName::random}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::vector<double> NormalizedScoreList::sorted() const {
  std::vector<double> out;
  out.reserve(sort_order.size());
  for (std::size_t i : sort_order) out.push_back(values[i]);
  return out;
}

std::pair<NormalizedScoreList, RankList> normalize_and_rank(const ScoreList& scores) {
  const auto& s = scores.values;
  for (double v : s) {
    if (!std::isfinite(v)) throw PreconditionError("normalize_and_rank: non-finite score");
  }
  NormalizedScoreList ns;
  ns.values.resize(s.size());
  if (!s.empty()) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    const double range = *hi - *lo;
    const double scale = std::pow(10.0, kTieDecimals);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = range > 0.0 ? (s[i] - *lo) / range : 0.5;
      ns.values[i] = std::round(v * scale) / scale;
    }
  }
  ns.sort_order.resize(s.size());
  std::iota(ns.sort_order.begin(), ns.sort_order.end(), std::size_t{0});
  std::stable_sort(ns.sort_order.begin(), ns.sort_order.end(),
                   [&](std::size_t a, std::size_t b) { return ns.values[a] < ns.values[b]; });
  RankList ranks = competition_ranks(ns.values);
  return {std::move(ns), std::move(ranks)};
}

ScoreList score_margin(const Model& model, const Eigen::MatrixXd& pool) {
  ScoreList out;
  out.criterion = CriterionName::margin;
  const Eigen::VectorXd p = model.positive_posteriors(pool);
  out.values.resize(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out.values[static_cast<std::size_t>(i)] = make_prediction(p(i)).p_max;
  out.flagged = model.degenerate();
  return out;
}

ScoreList score_diversity(const Eigen::MatrixXd& labeled, const Eigen::MatrixXd& pool, const Kernel& kernel,
                          DiversityReduce reduce) {
  if (labeled.rows() == 0) throw PreconditionError("diversity: labeled set is empty");
  if (labeled.cols() != pool.cols()) throw PreconditionError("diversity: dimension mismatch");
  ScoreList out;
  out.criterion = CriterionName::diversity;
  out.values.resize(static_cast<std::size_t>(pool.rows()));

  const Eigen::MatrixXd cross = kernel.gram(pool, labeled);
  Eigen::VectorXd self_pool(pool.rows());
  for (Eigen::Index i = 0; i < pool.rows(); ++i) self_pool(i) = kernel(pool.row(i).transpose(), pool.row(i).transpose());
  Eigen::VectorXd self_lab(labeled.rows());
  for (Eigen::Index m = 0; m < labeled.rows(); ++m) {
    self_lab(m) = kernel(labeled.row(m).transpose(), labeled.row(m).transpose());
  }

  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    double best = reduce == DiversityReduce::max ? -1.0 : 10.0;
    for (Eigen::Index m = 0; m < labeled.rows(); ++m) {
      const double denom = std::sqrt(self_pool(i) * self_lab(m));
      double angle;
      if (!(denom > 0.0)) {
        angle = std::numbers::pi / 2.0;
        out.flagged = true;
      } else {
        angle = std::acos(std::clamp(cross(i, m) / denom, -1.0, 1.0));
      }
      best = reduce == DiversityReduce::max ? std::max(best, angle) : std::min(best, angle);
    }
    out.values[static_cast<std::size_t>(i)] = -best;
  }
  return out;
}

ScoreList score_qbc(const Committee& committee, const Eigen::MatrixXd& pool) {
  if (committee.size() == 0) throw PreconditionError("qbc: empty committee");
  ScoreList out;
  out.criterion = CriterionName::qbc;
  const Eigen::MatrixXd votes = committee.positive_posteriors(pool);  // g x n
  const double g = static_cast<double>(votes.rows());
  out.values.resize(static_cast<std::size_t>(votes.cols()));
  for (Eigen::Index j = 0; j < votes.cols(); ++j) {
    const double mean = votes.col(j).sum() / g;
    const double var = (votes.col(j).array() - mean).square().sum() / g;
    out.values[static_cast<std::size_t>(j)] = -std::sqrt(std::max(var, 0.0));
  }
  for (const auto& m : committee.members) out.flagged = out.flagged || m.degenerate();
  return out;
}

ScoreList score_random(std::size_t pool_size, std::uint64_t seed) {
  ScoreList out;
  out.criterion = CriterionName::random;
  Rng rng(seed);
  out.values.resize(pool_size);
  for (double& v : out.values) v = rng.uniform01();
  return out;
}

}  // namespace rmqcal
