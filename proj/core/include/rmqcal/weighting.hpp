#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rmqcal/criteria.hpp"

namespace rmqcal {

/// Per-criterion weights for one iteration.
struct WeightVector {
  std::vector<double> weights;     // sums to 1
  std::vector<double> raw;         // w1 (non-committee) or w2 (committee) before blending
  std::vector<bool> committee;
  std::size_t c1 = 0;              // non-committee criteria
  std::size_t c2 = 0;              // committee criteria
  bool degenerate_group = false;   // some group had all-zero raw weights

  std::size_t size() const { return weights.size(); }
};

/// Best-versus-second-best gap of an ascending score list, relative to its range:
/// (S*(N) - S*(N+1)) / (S*(1) - S*(|U|)). A constant list gives 0.
double bvsb_weight(std::span<const double> sorted_scores, std::size_t batch);

/// Fraction of positions N+1..|U| whose score differs from S*(N), over |U|.
double duplicate_weight(std::span<const double> sorted_scores, std::size_t batch);

/// Blends raw weights so that the non-committee group carries c1/L and the
/// committee group c2/L of the total mass.
WeightVector blend_weights(std::span<const double> raw, const std::vector<bool>& committee);

/// Full weighting step for L normalized score lists.
WeightVector compute_weights(const std::vector<NormalizedScoreList>& lists, const std::vector<CriterionName>& kinds,
                             std::size_t batch);

}  // namespace rmqcal
