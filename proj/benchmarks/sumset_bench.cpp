#include <benchmark/benchmark.h>

#include "bmstab/convex_geometry.hpp"
#include "bmstab/harness.hpp"
#include "bmstab/sumset.hpp"

using namespace bmstab;

namespace {

const LatticeSpec kUnit(Rational(1), Rational(1), 1);

void BM_SquareSelfSum(benchmark::State& state, Engine engine) {
  const std::int64_t n = state.range(0);
  GridSet2D s = GridSet2D::rectangle(kUnit, 0, n, 0, n);
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum(s, s, engine));
  state.SetComplexityN(n);
}

void BM_RandomPair(benchmark::State& state, Engine engine) {
  Rng rng(7);
  GridSet2D a = random_grid(rng, kUnit, state.range(0)), b = random_grid(rng, kUnit, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum(a, b, engine));
}

void BM_Deficit(benchmark::State& state) {
  GeneratedPair p = generate({GeneratorKind::BitePair, state.range(0), Rational(1, 50), 3});
  for (auto _ : state) benchmark::DoNotOptimize(deficit(p.a, p.b, Rational(1, 2)));
}

void BM_ClipMeasure(benchmark::State& state) {
  GeneratedPair p = generate({GeneratorKind::BitePair, state.range(0), Rational(1, 50), 3});
  ConvexPolygon h = hull(p.baseA);
  for (auto _ : state) benchmark::DoNotOptimize(clip_measure(p.a, h));
}

void BM_SweepRow(benchmark::State& state) {
  GeneratorSpec spec{GeneratorKind::BitePair, state.range(0), Rational(1, 50), 3};
  for (auto _ : state) benchmark::DoNotOptimize(run_row(spec, Rational(1, 2)));
}

}  // namespace

BENCHMARK_CAPTURE(BM_SquareSelfSum, bitmask, Engine::Bitmask)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SquareSelfSum, conv, Engine::Convolution)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SquareSelfSum, naive, Engine::Naive)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RandomPair, bitmask, Engine::Bitmask)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_RandomPair, conv, Engine::Convolution)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Deficit)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClipMeasure)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepRow)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
