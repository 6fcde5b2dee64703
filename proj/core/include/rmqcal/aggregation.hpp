#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rmqcal/ranking.hpp"

namespace rmqcal {

// Rank lists passed to the aggregators are indexed by sample id 0..n-1 and
// must all cover the same n samples. Every aggregator breaks remaining ties
// by ascending sample id.

struct AggregatedRanking {
  std::vector<std::size_t> order;  // best first
  std::vector<double> scores;      // parallel to `order`
  std::size_t candidate_count = 0; // leading entries of `order` that were aggregated
  bool flagged = false;

  std::vector<std::size_t> top(std::size_t n) const;
  /// 1-based position of every sample in `order`.
  RankList positions() const;
};

// ---------------------------------------------------------------------------
// Borda

enum class BordaFusion { minimum, median, geometric_mean, p_norm };

/// How a rank list is mapped to Borda points before weighting.
///   positional: 1-based position in the list's preference order
///               (ties resolved by sample id);
///   rank:       the competition rank itself.
enum class BordaInput { positional, rank };

inline constexpr double kGeometricWeightFloor = 1e-9;

struct BordaConfig {
  BordaFusion fusion = BordaFusion::p_norm;
  double p = 1.0;
  BordaInput input = BordaInput::positional;
};

/// Fuses the weighted points w_k * MAP(R_k(i)) per sample and orders by
/// ascending fused score. Zero-weight lists do not vote under minimum and
/// median fusion; geometric-mean fusion floors zero weights at 1e-9 (flagged).
AggregatedRanking borda_aggregate(const std::vector<RankList>& lists, std::span<const double> weights,
                                  const BordaConfig& config = {});

// ---------------------------------------------------------------------------
// Bucklin

/// Deepens the choice level until a sample's accumulated weight exceeds 1/2,
/// emitting winners until `count` samples are confirmed (0 = all). Scores are the
/// level at which each sample was confirmed; unconfirmed samples follow by
/// accumulated support with score n + 1. Weights are normalized to sum 1.
AggregatedRanking bucklin_aggregate(const std::vector<RankList>& lists, std::span<const double> weights,
                                    std::size_t count = 0);

// ---------------------------------------------------------------------------
// Markov chain

enum class MarkovVariant { mc1, mc2, mc3 };

struct CandidateSet {
  std::vector<std::size_t> indices;  // ascending sample ids
  std::size_t n_star = 0;
  std::size_t tun2 = 0;
  bool truncated = true;  // false when every list was committee-based
};

/// Samples placed within the top N* = N + tun2 (rank <= N*) of at least one
/// non-committee list.
CandidateSet truncate_candidates(const std::vector<RankList>& lists, const std::vector<bool>& committee,
                                 std::size_t batch, std::size_t tun2);

struct TransitionMatrix {
  Eigen::MatrixXd entries;
  MarkovVariant variant = MarkovVariant::mc2;
  double tun1 = 0.05;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Weighted pairwise-preference chain over `candidates`, smoothed toward the
/// uniform matrix with tun1. Rows sum to 1; every entry >= tun1 / |C|.
TransitionMatrix build_transition(const std::vector<RankList>& lists, std::span<const double> weights,
                                  std::span<const std::size_t> candidates, MarkovVariant variant, double tun1);

/// Left Perron vector of a strictly positive row-stochastic matrix by power iteration.
Eigen::VectorXd stationary_distribution(const TransitionMatrix& matrix);

struct MarkovOptions {
  MarkovVariant variant = MarkovVariant::mc2;
  double tun1 = 0.05;
  std::size_t tun2 = 5;
  bool truncate = true;
  bool full_list = true;  // append non-candidates after the aggregated candidates
};

AggregatedRanking markov_aggregate(const std::vector<RankList>& lists, std::span<const double> weights,
                                   const std::vector<bool>& committee, std::size_t batch,
                                   const MarkovOptions& options = {});

// ---------------------------------------------------------------------------
// Distances and the exact minimizer

/// Unordered pairs ordered strictly oppositely by a and b; ties count 0.
std::int64_t kendall_distance(const RankList& a, const RankList& b);
/// Sum of |a_i - b_i|.
std::int64_t spearman_distance(const RankList& a, const RankList& b);

struct RankDistance {
  std::int64_t kendall = 0;
  std::int64_t spearman = 0;
};

/// Distances of `aggregate` to each list, summed.
RankDistance total_distance(const RankList& aggregate, const std::vector<RankList>& lists);

/// (1/L) * sum_k w_k * Kendall(candidate, R_k).
double weighted_kendall_objective(const RankList& candidate, const std::vector<RankList>& lists,
                                  std::span<const double> weights);

inline constexpr std::size_t kBruteForceLimit = 8;

/// Exhaustive minimizer of weighted_kendall_objective; first permutation in
/// lexicographic order wins ties. Refuses more than 8 samples.
AggregatedRanking brute_force_aggregate(const std::vector<RankList>& lists, std::span<const double> weights);

// ---------------------------------------------------------------------------

enum class AggregatorKind { borda_min, borda_median, borda_geo, borda_pnorm, bucklin, mc1, mc2, mc3 };

std::string_view to_string(AggregatorKind kind);
std::optional<AggregatorKind> parse_aggregator(std::string_view text);
std::span<const AggregatorKind> all_aggregators();

struct AggregatorOptions {
  double p = 1.0;
  double tun1 = 0.05;
  std::size_t tun2 = 5;
  bool truncate = true;
  BordaInput borda_input = BordaInput::positional;
};

/// Dispatches to the backend. `count` bounds how many samples Bucklin must
/// confirm (0 = all); Borda and Markov always return a full order.
AggregatedRanking aggregate(AggregatorKind kind, const std::vector<RankList>& lists, std::span<const double> weights,
                            const std::vector<bool>& committee, std::size_t batch, std::size_t count,
                            const AggregatorOptions& options = {});

}  // namespace rmqcal
