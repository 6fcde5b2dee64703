#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "rmqcal/ranking.hpp"

namespace rmqcal::cli {

/// Rank-list table: one row per sample, column 1 the sample id, then one
/// integer rank per list. A header row is optional.
struct RankTable {
  std::vector<std::string> sample_ids;
  std::vector<std::string> list_names;
  std::vector<RankList> lists;
  bool recoded = false;  // some column was not a competition ranking and was re-ranked
};

RankTable read_rank_table(std::istream& in);
RankTable read_rank_table(const std::filesystem::path& path);

/// One non-negative real per list, whitespace or comma separated.
std::vector<double> read_weights(std::istream& in);
std::vector<double> read_weights(const std::filesystem::path& path);

}  // namespace rmqcal::cli
