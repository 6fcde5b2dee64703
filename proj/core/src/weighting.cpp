#include "rmqcal/weighting.hpp"

#include <algorithm>
#include <string>

#include "rmqcal/error.hpp"

namespace rmqcal {

namespace {

void check_batch(std::span<const double> sorted, std::size_t batch) {
  if (batch == 0) throw PreconditionError("batch size must be >= 1");
  if (sorted.size() <= batch) {
    throw PreconditionError("need more than N = " + std::to_string(batch) + " unlabeled samples, have " +
                            std::to_string(sorted.size()));
  }
}

}  // namespace

double bvsb_weight(std::span<const double> sorted, std::size_t batch) {
  check_batch(sorted, batch);
  const double denom = sorted.front() - sorted.back();
  if (denom == 0.0) return 0.0;
  const double w = (sorted[batch - 1] - sorted[batch]) / denom;
  return std::clamp(w, 0.0, 1.0);
}

double duplicate_weight(std::span<const double> sorted, std::size_t batch) {
  check_batch(sorted, batch);
  const double pivot = sorted[batch - 1];
  std::size_t differing = 0;
  for (std::size_t i = batch; i < sorted.size(); ++i) {
    if (sorted[i] != pivot) ++differing;
  }
  return static_cast<double>(differing) / static_cast<double>(sorted.size());
}

WeightVector blend_weights(std::span<const double> raw, const std::vector<bool>& committee) {
  if (raw.empty()) throw PreconditionError("blend_weights: no criteria");
  if (raw.size() != committee.size()) throw PreconditionError("blend_weights: size mismatch");
  WeightVector out;
  out.raw.assign(raw.begin(), raw.end());
  out.committee = committee;
  out.weights.assign(raw.size(), 0.0);
  const double total = static_cast<double>(raw.size());

  double sum1 = 0.0;
  double sum2 = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] < 0.0) throw PreconditionError("blend_weights: negative raw weight");
    if (committee[k]) {
      ++out.c2;
      sum2 += raw[k];
    } else {
      ++out.c1;
      sum1 += raw[k];
    }
  }
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const bool in_committee = committee[k];
    const double group_sum = in_committee ? sum2 : sum1;
    const double group_size = static_cast<double>(in_committee ? out.c2 : out.c1);
    const double mass = group_size / total;
    if (group_sum > 0.0) {
      out.weights[k] = mass * raw[k] / group_sum;
    } else {
      out.weights[k] = mass / group_size;
      out.degenerate_group = true;
    }
  }
  return out;
}

WeightVector compute_weights(const std::vector<NormalizedScoreList>& lists, const std::vector<CriterionName>& kinds,
                             std::size_t batch) {
  if (lists.size() != kinds.size()) throw PreconditionError("compute_weights: size mismatch");
  std::vector<double> raw(lists.size());
  std::vector<bool> committee(lists.size());
  for (std::size_t k = 0; k < lists.size(); ++k) {
    const auto sorted = lists[k].sorted();
    committee[k] = is_committee(kinds[k]);
    raw[k] = committee[k] ? duplicate_weight(sorted, batch) : bvsb_weight(sorted, batch);
  }
  return blend_weights(raw, committee);
}

}  // namespace rmqcal
