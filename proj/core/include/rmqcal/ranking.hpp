#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmqcal {

/// Competition-style ("1224") ranks, one per sample; lower is better.
struct RankList {
  std::vector<int> ranks;

  std::size_t size() const { return ranks.size(); }
  int operator[](std::size_t i) const { return ranks[i]; }
};

/// rank(i) = 1 + #{j : values[j] < values[i]}.
RankList competition_ranks(std::span<const double> values);

/// Sample ids sorted by (rank, id).
std::vector<std::size_t> preference_order(const RankList& list);

/// 1-based position of each sample in preference_order(list). Equals the
/// input ranks when the list has no ties.
std::vector<int> ordinal_positions(const RankList& list);

/// True when ranks are a valid competition ranking (min 1, no gaps
/// inconsistent with tie counts).
bool is_competition_ranking(const RankList& list);

}  // namespace rmqcal
