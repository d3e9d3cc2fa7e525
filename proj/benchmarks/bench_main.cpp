#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "epsclust/coarsen.hpp"
#include "epsclust/graph.hpp"
#include "epsclust/mwis.hpp"
#include "epsclust/partition.hpp"
#include "epsclust/qubo.hpp"

namespace {

using namespace epsclust;

WeightedDataset uniform_points(std::size_t n, std::size_t dim, double extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<double> coords(n * dim);
  for (auto& c : coords) c = u(rng);
  return WeightedDataset(dim, std::move(coords), std::vector<double>(n, 1.0));
}

std::vector<std::size_t> all_ids(std::size_t n) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  return ids;
}

void BM_Partition(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = uniform_points(n, 2, 100.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(partition(ds, all_ids(n), PartitionConfig{1000}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Partition)->RangeMultiplier(2)->Range(1 << 14, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_BuildGraph(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = uniform_points(n, 3, 10.0, 2);
  const Chunk chunk{all_ids(n)};
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(ds, chunk, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGraph)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_GreedyMwis(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = uniform_points(n, 2, 30.0, 3);
  const auto g = build_graph(ds, Chunk{all_ids(n)}, 1.5);
  Rng rng(0);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_mwis(g, rng));
}
BENCHMARK(BM_GreedyMwis)->RangeMultiplier(2)->Range(128, 2048);

void BM_AnnealMwisQubo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = uniform_points(n, 2, 10.0, 4);
  const auto q = reduce_qubo(build_mwis_qubo(build_graph(ds, Chunk{all_ids(n)}, 1.5)));
  AnnealSchedule sched;
  for (auto _ : state) benchmark::DoNotOptimize(solve_qubo_anneal(q, sched));
}
BENCHMARK(BM_AnnealMwisQubo)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CoarsenLevel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = uniform_points(n, 2, 300.0, 5);
  LevelConfig cfg;
  cfg.epsilon = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(coarsen_level(ds, cfg));
}
BENCHMARK(BM_CoarsenLevel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
