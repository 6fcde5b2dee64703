#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rmqcal/error.hpp"
#include "rmqcal/eval.hpp"
#include "rmqcal/random.hpp"

using namespace rmqcal;

namespace {

double t_density(double x, double df) {
  return std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi) *
         std::pow(1 + x * x / df, -(df + 1) / 2);
}

// Composite Simpson integral of the density from 0 to |t|, plus the symmetric half.
double t_cdf_quadrature(double t, double df) {
  const int n = 20000;
  const double h = std::abs(t) / n;
  double s = t_density(0, df) + t_density(std::abs(t), df);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * t_density(i * h, df);
  const double half = s * h / 3;
  return t >= 0 ? 0.5 + half : 0.5 - half;
}

LearningCurve curve(const std::string& name, std::vector<std::vector<double>> values) {
  LearningCurve c;
  c.method = name;
  c.checkpoints = {0.1, 0.2};
  for (std::size_t s = 0; s < values.size(); ++s) c.seeds.push_back(s);
  c.values = std::move(values);
  return c;
}

}  // namespace

TEST(Accuracy, Basics) {
  const std::vector<int> t{1, -1, 1, -1};
  EXPECT_DOUBLE_EQ(accuracy(t, t), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(std::vector<int>{1, 1, 1, 1}, t), 0.5);
  EXPECT_THROW(accuracy(std::vector<int>{}, std::vector<int>{}), PreconditionError);
}

TEST(F1Score, Basics) {
  const std::vector<int> t{1, -1, 1, -1};
  EXPECT_DOUBLE_EQ(f1_score(t, t), 1.0);
  EXPECT_DOUBLE_EQ(f1_score(std::vector<int>{-1, -1, -1, -1}, t), 0.0);
  // P = R = 0.5
  EXPECT_DOUBLE_EQ(f1_score(std::vector<int>{1, 1, -1, -1}, t), 0.5);
}

TEST(Auc, Basics) {
  const std::vector<int> t{-1, -1, 1, 1};
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, t), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, t), 0.5);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, t), 0.75);
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), DomainError);
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  Rng r(1);
  std::vector<double> s, s2;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    s.push_back(std::round(r.normal() * 4) / 4);
    s2.push_back(std::exp(3 * s.back()));
    y.push_back(r.uniform01() < 0.5 ? -1 : 1);
  }
  EXPECT_DOUBLE_EQ(auc(s, y), auc(s2, y));
}

TEST(StudentT, MatchesQuadrature) {
  for (double df : {4.0, 9.0, 19.0}) {
    for (double t = -5.0; t <= 5.0; t += 0.25) EXPECT_NEAR(student_t_cdf(t, df), t_cdf_quadrature(t, df), 1e-6);
  }
}

TEST(IncompleteBeta, Endpoints) {
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 1.0), 1.0);
  EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-14);
}

TEST(PairedTTest, EqualIsTie) {
  const std::vector<double> a{0.8, 0.7, 0.9};
  EXPECT_EQ(paired_t_test(a, a).verdict, Verdict::tie);
}

TEST(PairedTTest, ConstantDifferenceIsDecided) {
  const std::vector<double> a{0.8, 0.7, 0.9}, b{0.7, 0.6, 0.8};
  EXPECT_EQ(paired_t_test(a, b).verdict, Verdict::win);
  EXPECT_EQ(paired_t_test(b, a).verdict, Verdict::loss);
}

TEST(PairedTTest, KnownDifferences) {
  const std::vector<double> a{1.2, 0.8, 1.0, 1.1, 0.9}, b(5, 0.0);
  const PairedTestResult r = paired_t_test(a, b);
  const double sd = std::sqrt(0.1 / 4);
  EXPECT_NEAR(r.t_stat, 1.0 / (sd / std::sqrt(5.0)), 1e-12);
  EXPECT_NEAR(r.p_value, 2 * (1 - t_cdf_quadrature(r.t_stat, 4)), 1e-6);
  EXPECT_EQ(r.verdict, Verdict::win);
}

TEST(PairedTTest, SwapFlipsVerdict) {
  Rng r(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(6), b(6);
    for (std::size_t i = 0; i < 6; ++i) {
      a[i] = r.normal();
      b[i] = r.normal() + 0.8;
    }
    const Verdict ab = paired_t_test(a, b).verdict, ba = paired_t_test(b, a).verdict;
    if (ab == Verdict::tie) {
      EXPECT_EQ(ba, Verdict::tie);
    } else {
      EXPECT_NE(ab, ba);
      EXPECT_NE(ba, Verdict::tie);
    }
  }
}

TEST(PairedTTest, NeedsTwoSamples) {
  EXPECT_THROW(paired_t_test(std::vector<double>{1.0}, std::vector<double>{2.0}), PreconditionError);
}

TEST(WinTieLoss, SelfComparisonIsAllTies) {
  const LearningCurve a = curve("a", {{0.5, 0.6}, {0.55, 0.7}, {0.52, 0.66}});
  const CurvePair p{&a, &a};
  const WinTieLossTable t = win_tie_loss(std::span<const CurvePair>(&p, 1));
  EXPECT_EQ(t.totals.tie, 2);
  EXPECT_EQ(t.totals.format(), "0/2/0");
}

TEST(WinTieLoss, DominationIsAllWins) {
  const LearningCurve a = curve("a", {{0.9, 0.95}, {0.91, 0.94}, {0.92, 0.96}});
  const LearningCurve b = curve("b", {{0.5, 0.6}, {0.52, 0.61}, {0.49, 0.58}});
  const std::vector<CurvePair> pairs{{&a, &b}, {&b, &a}};
  const WinTieLossTable t = win_tie_loss(pairs);
  EXPECT_EQ(t.verdicts[0], (std::vector<Verdict>{Verdict::win, Verdict::win}));
  EXPECT_EQ(t.verdicts[1], (std::vector<Verdict>{Verdict::loss, Verdict::loss}));
  EXPECT_EQ(t.per_checkpoint[0].format(), "1/0/1");
  EXPECT_EQ(t.totals.total(), 4);
}

TEST(WinTieLoss, GridMismatchIsError) {
  const LearningCurve a = curve("a", {{0.9, 0.95}, {0.91, 0.94}});
  LearningCurve b = a;
  b.checkpoints = {0.1, 0.3};
  const CurvePair p{&a, &b};
  EXPECT_THROW(win_tie_loss(std::span<const CurvePair>(&p, 1)), PreconditionError);
  LearningCurve c = a;
  c.seeds = {5, 6};
  const CurvePair q{&a, &c};
  EXPECT_THROW(win_tie_loss(std::span<const CurvePair>(&q, 1)), PreconditionError);
}
