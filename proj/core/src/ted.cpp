#include <algorithm>
#include <cmath>
#include <limits>

#include "rmqcal/criteria.hpp"
#include "rmqcal/error.hpp"

namespace rmqcal {

namespace {

constexpr double kNormFloor = 1e-12;

Eigen::VectorXd row_norms(const Eigen::MatrixXd& m) { return m.rowwise().norm(); }

// One reweighted ridge solve. `data_w` weights the feature rows of the
// residual, `group_w` the regularized groups of Z (columns when
// transpose_reg, rows otherwise).
Eigen::MatrixXd reweighted_solve(const Eigen::MatrixXd& u, const Eigen::VectorXd& data_w,
                                 const Eigen::VectorXd& group_w, double lambda, bool transpose_reg) {
  const Eigen::Index n = u.cols();
  const Eigen::MatrixXd b = data_w.cwiseSqrt().asDiagonal() * u;  // d x n
  if (transpose_reg) {
    // Columns decouple: z_c = B^T (BB^T + mu_c I)^{-1} b_c.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b * b.transpose());
    const Eigen::VectorXd s = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd p = eig.eigenvectors().transpose() * b;  // d x n
    Eigen::MatrixXd scaled(p.rows(), n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const double mu = lambda * group_w(c);
      scaled.col(c) = p.col(c).cwiseQuotient((s.array() + mu).matrix());
    }
    return p.transpose() * scaled;
  }
  // Row groups: Z = (B^T B + Lambda)^{-1} B^T B via the d x d push-through form.
  const Eigen::VectorXd inv_lambda = (lambda * group_w).cwiseInverse();
  const Eigen::MatrixXd bl = b * inv_lambda.asDiagonal();  // B Lambda^{-1}
  Eigen::MatrixXd inner = bl * b.transpose();
  inner.diagonal().array() += 1.0;
  const Eigen::MatrixXd right = inner.ldlt().solve(b);  // d x n
  return bl.transpose() * right;
}

}  // namespace

double l21_norm(const Eigen::MatrixXd& m) { return row_norms(m).sum(); }

double ted_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, double lambda, bool transpose_reg) {
  const Eigen::MatrixXd u = x.transpose();
  const double data = l21_norm(u - u * z);
  const double reg = transpose_reg ? l21_norm(z.transpose()) : l21_norm(z);
  return data + lambda * reg;
}

TedSolution solve_ted(const Eigen::MatrixXd& pool, const TedOptions& options) {
  if (pool.rows() < 2) throw PreconditionError("ted: need at least two pool samples");
  if (!(options.lambda > 0.0)) throw PreconditionError("ted: lambda must be > 0");
  const Eigen::MatrixXd u = pool.transpose();  // d x n, samples as columns
  const Eigen::Index n = u.cols();

  TedSolution best;
  best.lambda = options.lambda;
  best.objective = std::numeric_limits<double>::infinity();

  Eigen::VectorXd data_w = Eigen::VectorXd::Ones(u.rows());
  Eigen::VectorXd group_w = Eigen::VectorXd::Ones(n);
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < options.max_iter; ++iter) {
    Eigen::MatrixXd z = reweighted_solve(u, data_w, group_w, options.lambda, options.transpose_reg);
    const Eigen::MatrixXd residual = u - u * z;
    const double objective = l21_norm(residual) + options.lambda * (options.transpose_reg ? l21_norm(z.transpose())
                                                                                          : l21_norm(z));
    best.trace.push_back(objective);
    if (objective <= best.objective) {
      best.objective = objective;
      best.z = z;
    }
    if (std::isfinite(previous) && previous - objective <= options.tol * std::max(1.0, std::abs(previous))) {
      best.converged = true;
      break;
    }
    previous = objective;

    // Majorizer weights 1 / (2 ||group||), floored away from zero.
    data_w = row_norms(residual).cwiseMax(kNormFloor).cwiseInverse() * 0.5;
    const Eigen::VectorXd groups = options.transpose_reg ? Eigen::VectorXd(z.colwise().norm().transpose()) : row_norms(z);
    group_w = groups.cwiseMax(kNormFloor).cwiseInverse() * 0.5;
  }
  return best;
}

ScoreList score_ted(const TedSolution& solution, const TedOptions& options) {
  ScoreList out;
  out.criterion = CriterionName::ted;
  const Eigen::MatrixXd a = solution.z.cwiseAbs();
  const Eigen::VectorXd sums = options.axis == TedScoreAxis::row ? Eigen::VectorXd(a.rowwise().sum())
                                                                 : Eigen::VectorXd(a.colwise().sum().transpose());
  out.values.resize(static_cast<std::size_t>(sums.size()));
  for (Eigen::Index i = 0; i < sums.size(); ++i) out.values[static_cast<std::size_t>(i)] = -sums(i);
  out.flagged = !solution.converged;
  return out;
}

ScoreList score_ted(const Eigen::MatrixXd& pool, const TedOptions& options) {
  return score_ted(solve_ted(pool, options), options);
}

}  // namespace rmqcal
