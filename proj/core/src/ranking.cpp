#include "rmqcal/ranking.hpp"

#include <algorithm>
#include <numeric>

namespace rmqcal {

RankList competition_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  RankList out;
  out.ranks.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (pos > 0 && values[order[pos]] == values[order[pos - 1]]) {
      out.ranks[order[pos]] = out.ranks[order[pos - 1]];
    } else {
      out.ranks[order[pos]] = static_cast<int>(pos) + 1;
    }
  }
  return out;
}

std::vector<std::size_t> preference_order(const RankList& list) {
  std::vector<std::size_t> order(list.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return list.ranks[a] < list.ranks[b]; });
  return order;
}

std::vector<int> ordinal_positions(const RankList& list) {
  const auto order = preference_order(list);
  std::vector<int> pos(list.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = static_cast<int>(p) + 1;
  return pos;
}

bool is_competition_ranking(const RankList& list) {
  if (list.ranks.empty()) return true;
  std::vector<double> values(list.ranks.begin(), list.ranks.end());
  return competition_ranks(values).ranks == list.ranks;
}

}  // namespace rmqcal
