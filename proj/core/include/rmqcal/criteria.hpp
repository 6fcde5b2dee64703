#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmqcal/learner.hpp"
#include "rmqcal/ranking.hpp"

namespace rmqcal {

enum class CriterionName { margin, diversity, qbc, ted, random };
enum class CriterionTag { certainty, committee, representativeness };

CriterionTag tag_of(CriterionName name);
inline bool is_committee(CriterionName name) { return tag_of(name) == CriterionTag::committee; }

std::string_view to_string(CriterionName name);
std::string_view to_string(CriterionTag tag);
std::optional<CriterionName> parse_criterion(std::string_view text);

/// Raw per-sample scores over the unlabeled pool, in pool order.
/// Lower score = more valuable.
struct ScoreList {
  std::vector<double> values;
  CriterionName criterion = CriterionName::margin;
  bool flagged = false;  // a degenerate input was substituted somewhere
};

struct NormalizedScoreList {
  std::vector<double> values;          // in [0, 1], pool order
  std::vector<std::size_t> sort_order; // ascending by (value, index)

  /// values[sort_order[i]]: the ascending list S* used by the weighting step.
  std::vector<double> sorted() const;
};

inline constexpr int kTieDecimals = 12;

/// Min-max normalizes to [0, 1] (constant list -> 0.5), rounds to 12 decimals
/// and derives competition ranks from the rounded values.
std::pair<NormalizedScoreList, RankList> normalize_and_rank(const ScoreList& scores);

/// f(x) = p_max(x).
ScoreList score_margin(const Model& model, const Eigen::MatrixXd& pool);

enum class DiversityReduce { max, min };

/// -1 * reduce over labeled a of the kernel angle between x and a.
ScoreList score_diversity(const Eigen::MatrixXd& labeled, const Eigen::MatrixXd& pool, const Kernel& kernel,
                          DiversityReduce reduce = DiversityReduce::max);

/// -1 * population standard deviation of the members' positive posteriors.
ScoreList score_qbc(const Committee& committee, const Eigen::MatrixXd& pool);

/// Uniform noise; a plumbing baseline tagged as representativeness.
ScoreList score_random(std::size_t pool_size, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Transductive experimental design

enum class TedScoreAxis { row, column };

struct TedOptions {
  double lambda = 0.1;
  int max_iter = 100;
  double tol = 1e-8;          // relative objective decrease that ends the solve
  bool transpose_reg = true;  // regularize ||Z^T||_{2,1} (column groups of Z)
  TedScoreAxis axis = TedScoreAxis::row;
};

struct TedSolution {
  Eigen::MatrixXd z;        // n x n, n = pool size
  double lambda = 0.0;
  double objective = 0.0;   // value at `z`
  std::vector<double> trace;  // objective per iterate, starting with the first solve
  bool converged = false;
};

/// Sum of Euclidean norms of the rows of m.
double l21_norm(const Eigen::MatrixXd& m);

/// ||X^T - X^T Z||_{2,1} + lambda * reg(Z), with samples as the rows of x.
double ted_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, double lambda, bool transpose_reg);

/// Iteratively reweighted least squares for the TED reconstruction problem.
TedSolution solve_ted(const Eigen::MatrixXd& pool, const TedOptions& options = {});

/// -1 * |Z| summed along the configured axis; flagged when the solve did not converge.
ScoreList score_ted(const TedSolution& solution, const TedOptions& options = {});
ScoreList score_ted(const Eigen::MatrixXd& pool, const TedOptions& options = {});

}  // namespace rmqcal
