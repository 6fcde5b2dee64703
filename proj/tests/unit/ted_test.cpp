#include <gtest/gtest.h>

#include "rmqcal/criteria.hpp"
#include "rmqcal/error.hpp"
#include "rmqcal/random.hpp"

using namespace rmqcal;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Rng r(seed);
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = r.normal();
  }
  return m;
}

// Objective written out from its definition, independent of l21_norm.
double objective_oracle(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, double lambda, bool transpose_reg) {
  const Eigen::MatrixXd u = x.transpose();
  const Eigen::MatrixXd r = u - u * z;
  double data = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) data += std::sqrt(r.row(i).squaredNorm());
  const Eigen::MatrixXd g = transpose_reg ? Eigen::MatrixXd(z.transpose()) : z;
  double reg = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) reg += std::sqrt(g.row(i).squaredNorm());
  return data + lambda * reg;
}

}  // namespace

TEST(L21Norm, SumOfRowNorms) {
  Eigen::MatrixXd m(2, 2);
  m << 3, 4, 0, 1;
  EXPECT_DOUBLE_EQ(l21_norm(m), 6.0);
}

TEST(SolveTed, ObjectiveMonotoneAndMatchesOracle) {
  const Eigen::MatrixXd x = random_matrix(6, 2, 1);
  for (bool transpose_reg : {true, false}) {
    TedOptions o;
    o.lambda = 0.1;
    o.transpose_reg = transpose_reg;
    const TedSolution s = solve_ted(x, o);
    ASSERT_FALSE(s.trace.empty());
    for (std::size_t i = 1; i < s.trace.size(); ++i) EXPECT_LE(s.trace[i], s.trace[i - 1] + 1e-12);
    EXPECT_NEAR(s.objective, objective_oracle(x, s.z, 0.1, transpose_reg), 1e-8);
    EXPECT_NEAR(ted_objective(x, s.z, 0.1, transpose_reg), s.objective, 1e-12);
  }
}

TEST(SolveTed, BeatsTrivialSolutions) {
  const Eigen::MatrixXd x = random_matrix(8, 3, 2);
  const TedSolution s = solve_ted(x, {});
  const Eigen::Index n = x.rows();
  EXPECT_LE(s.objective, objective_oracle(x, Eigen::MatrixXd::Zero(n, n), 0.1, true) + 1e-12);
  EXPECT_LE(s.objective, objective_oracle(x, Eigen::MatrixXd::Identity(n, n), 0.1, true) + 1e-12);
}

TEST(ScoreTed, DuplicateRowsScoreEqually) {
  Eigen::MatrixXd x = random_matrix(5, 3, 3);
  x.row(4) = x.row(1);
  const ScoreList s = score_ted(x, {});
  EXPECT_NEAR(s.values[1], s.values[4], 1e-6);
}

TEST(ScoreTed, LargeLambdaDrivesScoresToZero) {
  TedOptions o;
  o.lambda = 1e8;
  const ScoreList s = score_ted(random_matrix(6, 2, 4), o);
  for (double v : s.values) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(ScoreTed, ScoresAreNonPositiveRowSums) {
  const Eigen::MatrixXd x = random_matrix(7, 2, 5);
  TedOptions o;
  const TedSolution sol = solve_ted(x, o);
  const ScoreList s = score_ted(sol, o);
  for (Eigen::Index i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(s.values[static_cast<std::size_t>(i)], -sol.z.row(i).cwiseAbs().sum());
  o.axis = TedScoreAxis::column;
  const ScoreList c = score_ted(sol, o);
  for (Eigen::Index i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(c.values[static_cast<std::size_t>(i)], -sol.z.col(i).cwiseAbs().sum());
}

TEST(SolveTed, RejectsDegenerateInput) {
  EXPECT_THROW(solve_ted(random_matrix(1, 2, 0), {}), PreconditionError);
  TedOptions o;
  o.lambda = 0.0;
  EXPECT_THROW(solve_ted(random_matrix(4, 2, 0), o), PreconditionError);
}

TEST(SolveTed, IterationCapReturnsFlaggedBestIterate) {
  TedOptions o;
  o.max_iter = 1;
  o.tol = 1e-300;
  const Eigen::MatrixXd x = random_matrix(6, 2, 6);
  const TedSolution s = solve_ted(x, o);
  EXPECT_FALSE(s.converged);
  EXPECT_TRUE(score_ted(s, o).flagged);
  EXPECT_NEAR(s.objective, objective_oracle(x, s.z, o.lambda, true), 1e-8);
}
