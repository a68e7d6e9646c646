#include <benchmark/benchmark.h>

#include "bandseg/exact.hpp"
#include "bandseg/heuristic.hpp"
#include "bandseg/rng.hpp"
#include "bandseg/segmentation.hpp"
#include "bandseg/sparse.hpp"
#include "bandseg/spectral.hpp"
#include "bandseg/synth.hpp"

namespace {

using namespace bandseg;

ValueGrid random_binary_grid(Index rows, Index cols, std::uint64_t seed, double p) {
  Rng rng(seed);
  std::vector<double> v(static_cast<std::size_t>(rows) * cols);
  for (double& x : v) x = rng.uniform() < p ? 1.0 : 0.0;
  return ValueGrid::rectangle(rows, cols, std::move(v));
}

void BM_GridIsotonic(benchmark::State& state) {
  const Index n = static_cast<Index>(state.range(0));
  const ValueGrid grid = random_binary_grid(n, n, 7, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(grid_isotonic(grid));
}
BENCHMARK(BM_GridIsotonic)->Arg(32)->Arg(64)->Arg(128);

void BM_BordersOfOrder(benchmark::State& state) {
  const Index n = static_cast<Index>(state.range(0));
  const ValueGrid grid = random_binary_grid(n, n, 11, 0.3);
  const EntryOrder order = random_monotonic_order(grid, 3);
  for (auto _ : state) benchmark::DoNotOptimize(borders_of_order(order, grid));
}
BENCHMARK(BM_BordersOfOrder)->Arg(64)->Arg(128)->Arg(256);

void BM_SegmentDp(benchmark::State& state) {
  const ValueGrid grid = random_binary_grid(64, 64, 5, 0.4);
  const BorderChain chain = exact_borders(grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(segment_dp(chain, 4, ScoreModel::bernoulli()));
}
BENCHMARK(BM_SegmentDp);

void BM_SparseIteration(benchmark::State& state) {
  const Index n = static_cast<Index>(state.range(0));
  const auto truth = generate_banded_graph(n, std::vector<Index>{8, 24},
                                           std::vector<double>{0.8, 0.4, 0.05}, 13, false);
  HeuristicParams hp;
  hp.max_iters = 16;
  hp.stall_window = 4;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sparse_heuristic_borders(truth.graph, VertexOrder::identity(n), hp));
}
BENCHMARK(BM_SparseIteration)->Arg(200)->Arg(500);

void BM_FiedlerOrder(benchmark::State& state) {
  const Index n = static_cast<Index>(state.range(0));
  const auto truth = generate_staircase_graph(n, 12, 17, false);
  for (auto _ : state) benchmark::DoNotOptimize(fiedler_order(truth.graph));
}
BENCHMARK(BM_FiedlerOrder)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
