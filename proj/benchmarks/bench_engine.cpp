#include <benchmark/benchmark.h>

#include <random>

#include "plc/engine.hpp"
#include "plc/oracles.hpp"

using namespace plc;

namespace {

Configuration stage_config(int stage) {
  Configuration c = init(canonical_start());
  for (int i = 1; i < stage; ++i) c = run_stage(c, ParallelPolicy::skip).first;
  return c;
}

void BM_normalize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  BigInt a(static_cast<long>(rand_int(rng, -1000000, 1000000)));
  BigInt b(static_cast<long>(rand_int(rng, -1000000, 1000000)));
  BigInt c(static_cast<long>(rand_int(rng, -1000000, 1000000)) | 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalized_point(a * 6, b * 6, c * 6));
  }
}
BENCHMARK(BM_normalize);

void BM_meet(benchmark::State& state) {
  const Line l1{3, -5, 7};
  const Line l2{11, 13, -17};
  for (auto _ : state) {
    benchmark::DoNotOptimize(meet(l1, l2));
  }
}
BENCHMARK(BM_meet);

void BM_stage(benchmark::State& state) {
  const Configuration c = stage_config(static_cast<int>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_stage(c, ParallelPolicy::skip, {}, workers));
  }
  state.SetLabel(std::to_string(c.points.size()) + " points, " +
                 std::to_string(c.lines.size()) + " lines in");
}
BENCHMARK(BM_stage)->Args({2, 1})->Args({3, 1})->Args({3, 2})->Args({3, 4})
    ->Unit(benchmark::kMillisecond);

void BM_naive_stage(benchmark::State& state) {
  const Configuration c = stage_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(naive_stage(c, ParallelPolicy::skip));
  }
}
BENCHMARK(BM_naive_stage)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_grid_cover(benchmark::State& state) {
  const GridSpec g = arithmetic_grid(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_cover_min(g));
  }
}
BENCHMARK(BM_grid_cover)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
