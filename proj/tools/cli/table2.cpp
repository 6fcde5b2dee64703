#include "table2.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>

namespace rmqcal::cli {

const std::array<std::array<int, kToyLists>, kToySamples> kToyRanks = {{
    {8, 6, 3, 3, 7, 4, 1},
    {10, 8, 2, 2, 9, 5, 1},
    {2, 2, 1, 1, 5, 3, 1},
    {9, 1, 4, 4, 3, 2, 1},
    {5, 7, 8, 10, 10, 7, 5},
    {7, 10, 8, 8, 1, 1, 5},
    {6, 5, 8, 9, 8, 10, 5},
    {1, 9, 6, 7, 2, 8, 5},
    {4, 4, 5, 6, 6, 9, 5},
    {3, 3, 7, 5, 4, 6, 5},
}};

const std::array<ToyReference, 8> kToyReference = {{
    {AggregatorKind::borda_min, {1, 6, 2, 3, 9, 4, 10, 5, 8, 7}, {93, 178}},
    {AggregatorKind::borda_median, {2, 4, 1, 3, 7, 8, 10, 9, 6, 5}, {83, 156}},
    {AggregatorKind::borda_pnorm, {3, 5, 1, 2, 9, 7, 10, 6, 8, 4}, {81, 156}},
    {AggregatorKind::borda_geo, {3, 4, 1, 2, 9, 5, 10, 6, 8, 7}, {84, 166}},
    {AggregatorKind::bucklin, {}, {85, 152}},
    {AggregatorKind::mc1, {}, {99, 172}},
    {AggregatorKind::mc2, {}, {79, 154}},
    {AggregatorKind::mc3, {}, {84, 158}},
}};

std::vector<RankList> toy_lists() {
  std::vector<RankList> lists(kToyLists);
  for (std::size_t k = 0; k < kToyLists; ++k) {
    for (std::size_t i = 0; i < kToySamples; ++i) lists[k].ranks.push_back(kToyRanks[i][k]);
  }
  return lists;
}

std::vector<ToyColumn> run_toy(double* elapsed_ms) {
  const auto lists = toy_lists();
  const std::vector<double> weights(kToyLists, 1.0 / kToyLists);
  const std::vector<bool> committee(kToyLists, false);
  AggregatorOptions opts;
  opts.p = 1.0;
  opts.tun1 = 0.05;
  opts.truncate = false;

  const auto start = std::chrono::steady_clock::now();
  std::vector<ToyColumn> out;
  for (AggregatorKind kind : all_aggregators()) {
    const AggregatedRanking agg = aggregate(kind, lists, weights, committee, 1, 0, opts);
    ToyColumn col{kind, agg.positions(), {}};
    col.distance = total_distance(col.ranks, lists);
    out.push_back(std::move(col));
  }
  if (elapsed_ms) {
    *elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

namespace {

const ToyColumn& column_of(const std::vector<ToyColumn>& cols, AggregatorKind kind) {
  return *std::find_if(cols.begin(), cols.end(), [&](const ToyColumn& c) { return c.kind == kind; });
}

const ToyReference& reference_of(AggregatorKind kind) {
  return *std::find_if(kToyReference.begin(), kToyReference.end(),
                       [&](const ToyReference& r) { return r.kind == kind; });
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

ToyCheck distance_check(const std::string& criterion, const std::vector<ToyColumn>& cols, AggregatorKind kind) {
  const auto& got = column_of(cols, kind).distance;
  const auto& want = reference_of(kind).distance;
  ToyCheck c;
  c.criterion = criterion;
  c.name = std::string(to_string(kind)) + " distances";
  c.passed = std::llabs(got.kendall - want.kendall) <= kKendallTolerance &&
             std::llabs(got.spearman - want.spearman) <= kSpearmanTolerance;
  std::ostringstream os;
  os << "(" << got.kendall << "," << got.spearman << ") vs (" << want.kendall << "," << want.spearman << ") +-("
     << kKendallTolerance << "," << kSpearmanTolerance << ")";
  c.detail = os.str();
  return c;
}

}  // namespace

std::vector<ToyCheck> check_toy(const std::vector<ToyColumn>& cols, double elapsed_ms) {
  std::vector<ToyCheck> out;

  const auto& pnorm = column_of(cols, AggregatorKind::borda_pnorm);
  const auto& want = reference_of(AggregatorKind::borda_pnorm).ranks;
  ToyCheck order{"AC1", "borda-pnorm order", pnorm.ranks.ranks == std::vector<int>(want.begin(), want.end()), ""};
  order.detail = "[" + join(pnorm.ranks.ranks) + "] vs [" + join({want.begin(), want.end()}) + "]";
  out.push_back(order);
  for (auto kind : {AggregatorKind::borda_pnorm, AggregatorKind::borda_median, AggregatorKind::bucklin,
                    AggregatorKind::borda_min, AggregatorKind::borda_geo}) {
    out.push_back(distance_check("AC1", cols, kind));
  }
  std::ostringstream rt;
  rt << elapsed_ms << " ms < " << kToyRuntimeLimitMs << " ms";
  out.push_back({"AC1", "runtime", elapsed_ms < kToyRuntimeLimitMs, rt.str()});

  const auto& mc2 = column_of(cols, AggregatorKind::mc2).ranks;
  const std::vector<int> head(mc2.ranks.begin(), mc2.ranks.begin() + 4);
  ToyCheck top{"AC2", "mc2 top-4", head == std::vector<int>{3, 4, 1, 2}, ""};
  // positions of Sample1..4 must be 3,4,1,2 for the top four to be Sample3, Sample4, Sample1, Sample2
  top.detail = "positions of Sample1-4 [" + join(head) + "] vs [3,4,1,2]";
  out.push_back(top);
  for (auto kind : {AggregatorKind::mc1, AggregatorKind::mc2, AggregatorKind::mc3}) {
    out.push_back(distance_check("AC2", cols, kind));
  }
  return out;
}

}  // namespace rmqcal::cli
