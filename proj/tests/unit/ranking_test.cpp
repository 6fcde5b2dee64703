#include <gtest/gtest.h>

#include "rmqcal/random.hpp"
#include "rmqcal/ranking.hpp"

using namespace rmqcal;

TEST(CompetitionRanks, TiesShareMinimalRank) {
  const std::vector<double> v{0.2, 0.5, 0.2};
  EXPECT_EQ(competition_ranks(v).ranks, (std::vector<int>{1, 3, 1}));
}

TEST(CompetitionRanks, MatchesCountingDefinition) {
  Rng r(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(30);
    for (double& x : v) x = static_cast<double>(r.uniform_index(8));
    const RankList ranks = competition_ranks(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      int expected = 1;
      for (double w : v) expected += w < v[i];
      ASSERT_EQ(ranks[i], expected);
    }
    ASSERT_TRUE(is_competition_ranking(ranks));
  }
}

TEST(PreferenceOrder, TiesBrokenById) {
  const RankList l{{2, 1, 2, 1}};
  EXPECT_EQ(preference_order(l), (std::vector<std::size_t>{1, 3, 0, 2}));
  EXPECT_EQ(ordinal_positions(l), (std::vector<int>{3, 1, 4, 2}));
}

TEST(OrdinalPositions, EqualRanksWithoutTies) {
  const RankList l{{3, 1, 2}};
  EXPECT_EQ(ordinal_positions(l), l.ranks);
}

TEST(IsCompetitionRanking, RejectsDenseAndGappedRanks) {
  EXPECT_TRUE(is_competition_ranking(RankList{{1, 2, 2, 4}}));
  EXPECT_FALSE(is_competition_ranking(RankList{{1, 2, 2, 3}}));
  EXPECT_FALSE(is_competition_ranking(RankList{{2, 3}}));
}
