#pragma once

#include <array>
#include <string>
#include <vector>

#include "rmqcal/aggregation.hpp"

namespace rmqcal::cli {

inline constexpr std::size_t kToySamples = 10;
inline constexpr std::size_t kToyLists = 7;

/// The seven rank lists of the toy example; rows are Sample1..Sample10.
extern const std::array<std::array<int, kToyLists>, kToySamples> kToyRanks;

std::vector<RankList> toy_lists();

struct ToyColumn {
  AggregatorKind kind;
  RankList ranks;  // aggregated position of each sample
  RankDistance distance;
};

/// Published toy-example results for one aggregator.
struct ToyReference {
  AggregatorKind kind;
  std::array<int, kToySamples> ranks;
  RankDistance distance;
};

extern const std::array<ToyReference, 8> kToyReference;

/// All eight aggregators with uniform weights, tun1 = 0.05, no truncation.
std::vector<ToyColumn> run_toy(double* elapsed_ms = nullptr);

inline constexpr std::int64_t kKendallTolerance = 2;
inline constexpr std::int64_t kSpearmanTolerance = 4;
inline constexpr double kToyRuntimeLimitMs = 10.0;

struct ToyCheck {
  std::string criterion;  // "AC1" or "AC2"
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<ToyCheck> check_toy(const std::vector<ToyColumn>& columns, double elapsed_ms);

}  // namespace rmqcal::cli
