#include <benchmark/benchmark.h>

#include "flagcount/enumerate.hpp"
#include "flagcount/predictions.hpp"
#include "flagcount/shape.hpp"

using namespace flagcount;

static void BM_CountPlaneVectors(benchmark::State& state) {
  Rational const X = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_flags({2, {1, 1}, HeightKind::INF, X * X}).total);
  }
}
BENCHMARK(BM_CountPlaneVectors)->Arg(50)->Arg(200);

static void BM_CountLinesAndPlanes(benchmark::State& state) {
  Rational const X = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_flags({3, {1, 2}, HeightKind::INF, X * X}).total);
  }
}
BENCHMARK(BM_CountLinesAndPlanes)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_CountCompleteFlagsAc(benchmark::State& state) {
  Rational const X = state.range(0);
  bool const split = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_flags({3, {1, 1, 1}, HeightKind::AC, X * X}, {1, split}).total);
  }
}
BENCHMARK(BM_CountCompleteFlagsAc)->Args({256, 0})->Args({256, 1})->Args({1024, 1})->Unit(benchmark::kMillisecond);

static void BM_EnumerateWithShapes(benchmark::State& state) {
  for (auto _ : state) {
    std::size_t n = 0;
    enumerate_flags({3, {2, 1}, HeightKind::INF, 100}, [&](FlagChain const& f) {
      n += shape_vector(f).size();
    });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_EnumerateWithShapes)->Unit(benchmark::kMillisecond);

static void BM_FlagConstant(benchmark::State& state) {
  Partition const p({1, 2, 1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(flag_constant(p));
}
BENCHMARK(BM_FlagConstant);

static void BM_LemmaQuadrature(benchmark::State& state) {
  int const m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(f_quadrature(m, 2.0));
}
BENCHMARK(BM_LemmaQuadrature)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
