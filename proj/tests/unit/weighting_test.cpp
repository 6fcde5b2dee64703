#include <gtest/gtest.h>

#include <numeric>

#include "rmqcal/error.hpp"
#include "rmqcal/random.hpp"
#include "rmqcal/weighting.hpp"

using namespace rmqcal;

namespace {

NormalizedScoreList normalized(const std::vector<double>& raw) {
  ScoreList s;
  s.values = raw;
  return normalize_and_rank(s).first;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(BvsbWeight, IdealStepListIsOne) {
  const std::vector<double> s{0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(bvsb_weight(s, 2), 1.0);
}

TEST(BvsbWeight, ConstantListIsZero) {
  const std::vector<double> s{0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(bvsb_weight(s, 1), 0.0);
}

TEST(BvsbWeight, DirectEvaluation) {
  const std::vector<double> s{0, 0.5, 0.9, 1.0};
  EXPECT_DOUBLE_EQ(bvsb_weight(s, 1), 0.5);
}

TEST(BvsbWeight, PoolNotLargerThanBatchIsError) {
  const std::vector<double> s{0, 1};
  EXPECT_THROW(bvsb_weight(s, 2), PreconditionError);
  EXPECT_THROW(bvsb_weight(s, 0), PreconditionError);
}

TEST(DuplicateWeight, FullTieIsZero) {
  const std::vector<double> s{0.3, 0.3, 0.3, 0.3};
  EXPECT_DOUBLE_EQ(duplicate_weight(s, 1), 0.0);
}

TEST(DuplicateWeight, DirectCount) {
  const std::vector<double> s{0, 0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(duplicate_weight(s, 1), 0.4);
}

TEST(DuplicateWeight, NoDuplicatesIsMaximal) {
  const std::vector<double> s{0, 0.1, 0.2, 0.3, 0.4, 0.5};
  EXPECT_DOUBLE_EQ(duplicate_weight(s, 2), 4.0 / 6.0);
}

TEST(BlendWeights, OneCommitteeOneOtherIsEqualSplit) {
  const std::vector<double> raw{0.37, 0.02};
  const WeightVector w = blend_weights(raw, {false, true});
  EXPECT_EQ(w.weights, (std::vector<double>{0.5, 0.5}));
}

TEST(BlendWeights, TwoNonCommittee) {
  const std::vector<double> raw{1.0, 0.5};
  const WeightVector w = blend_weights(raw, {false, false});
  EXPECT_NEAR(w.weights[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w.weights[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(w.c1, 2u);
  EXPECT_EQ(w.c2, 0u);
}

TEST(BlendWeights, SingleCriterion) {
  const std::vector<double> raw{0.0};
  EXPECT_EQ(blend_weights(raw, {false}).weights, (std::vector<double>{1.0}));
}

TEST(BlendWeights, AllZeroGroupSpreadsUniformly) {
  const std::vector<double> raw{0.0, 0.0, 0.3};
  const WeightVector w = blend_weights(raw, {false, false, true});
  EXPECT_TRUE(w.degenerate_group);
  EXPECT_NEAR(w.weights[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w.weights[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w.weights[2], 1.0 / 3.0, 1e-15);
}

TEST(BlendWeights, EmptyIsError) { EXPECT_THROW(blend_weights(std::vector<double>{}, {}), PreconditionError); }

TEST(ComputeWeights, SumAndGroupMassLaws) {
  Rng r(21);
  const std::vector<CriterionName> all{CriterionName::margin, CriterionName::diversity, CriterionName::qbc,
                                       CriterionName::ted};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t L = 1 + r.uniform_index(5);
    const std::size_t n = 5 + r.uniform_index(30);
    const std::size_t batch = 1 + r.uniform_index(3);
    std::vector<NormalizedScoreList> lists;
    std::vector<CriterionName> kinds;
    for (std::size_t k = 0; k < L; ++k) {
      std::vector<double> raw(n);
      const std::size_t levels = 1 + r.uniform_index(6);
      for (double& v : raw) v = static_cast<double>(r.uniform_index(levels));
      lists.push_back(normalized(raw));
      kinds.push_back(all[r.uniform_index(all.size())]);
    }
    const WeightVector w = compute_weights(lists, kinds, batch);
    ASSERT_NEAR(sum(w.weights), 1.0, 1e-12);
    double committee_mass = 0.0, other_mass = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      ASSERT_GE(w.weights[k], 0.0);
      ASSERT_LE(w.weights[k], 1.0);
      (is_committee(kinds[k]) ? committee_mass : other_mass) += w.weights[k];
    }
    if (w.c1 > 0 && w.c2 > 0) {
      ASSERT_NEAR(other_mass, static_cast<double>(w.c1) / static_cast<double>(L), 1e-12);
      ASSERT_NEAR(committee_mass, static_cast<double>(w.c2) / static_cast<double>(L), 1e-12);
    }
  }
}

TEST(ComputeWeights, AffineRescalingInvariant) {
  Rng r(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(20), b(20);
    for (double& v : a) v = r.normal();
    for (double& v : b) v = static_cast<double>(r.uniform_index(4));
    std::vector<double> a2 = a, b2 = b;
    for (double& v : a2) v = 7.5 * v - 3.0;
    for (double& v : b2) v = 0.01 * v + 100.0;
    const std::vector<CriterionName> kinds{CriterionName::margin, CriterionName::qbc};
    const auto w1 = compute_weights({normalized(a), normalized(b)}, kinds, 1).weights;
    const auto w2 = compute_weights({normalized(a2), normalized(b2)}, kinds, 1).weights;
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(w1[k], w2[k], 1e-12);
  }
}

TEST(ComputeWeights, LargerGapNeverLowersWeight) {
  const std::vector<double> other{0, 0.2, 0.4, 0.6, 0.8, 1.0};
  double previous = -1.0;
  for (double gap : {0.05, 0.1, 0.3, 0.6, 0.9}) {
    const std::vector<double> mine{0.0, gap, gap + 0.02, 0.97, 0.99, 1.0};
    const auto w = compute_weights({normalized(mine), normalized(other)},
                                   {CriterionName::margin, CriterionName::diversity}, 1).weights;
    EXPECT_GE(w[0], previous);
    previous = w[0];
  }
}
