#include <benchmark/benchmark.h>

#include <vector>

#include "rmqcal/aggregation.hpp"
#include "rmqcal/random.hpp"

using namespace rmqcal;

namespace {

std::vector<RankList> random_lists(std::size_t n, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RankList> lists;
  for (std::size_t l = 0; l < count; ++l) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform01();
    lists.push_back(competition_ranks(v));
  }
  return lists;
}

void BM_Aggregate(benchmark::State& state) {
  const auto kind = static_cast<AggregatorKind>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto lists = random_lists(n, 3, 11);
  const std::vector<double> weights{0.5, 0.3, 0.2};
  const std::vector<bool> committee{false, false, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(aggregate(kind, lists, weights, committee, 1, 1));
  }
  state.SetLabel(std::string(to_string(kind)));
}

void aggregate_args(benchmark::internal::Benchmark* b) {
  for (AggregatorKind kind : all_aggregators()) {
    for (int n : {500, 5000}) b->Args({static_cast<int>(kind), n});
  }
}

BENCHMARK(BM_Aggregate)->Apply(aggregate_args)->Unit(benchmark::kMicrosecond);

void BM_MarkovUntruncated(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto lists = random_lists(n, 3, 13);
  const std::vector<double> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  MarkovOptions opts;
  opts.truncate = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(markov_aggregate(lists, weights, {false, false, false}, 1, opts));
  }
}

BENCHMARK(BM_MarkovUntruncated)->Arg(20)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
