#include <benchmark/benchmark.h>

#include <numbers>

#include "zzspec/discretize.hpp"
#include "zzspec/eigensolve.hpp"
#include "zzspec/geometry.hpp"

using namespace zzspec;

namespace {

constexpr double kPi = std::numbers::pi;

DiscretizableDomain l_shape() {
  BuildOptions b;
  b.truncation = 30.0;
  return build_domain({LShape{kPi}}, b);
}

GridSettings grid(int n) {
  GridSettings g;
  g.h = kPi / n;
  return g;
}

void BM_AssembleLShape(benchmark::State& state) {
  const DiscretizableDomain d = l_shape();
  const GridSettings g = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    GridOperator op = discretize(d, g);
    benchmark::DoNotOptimize(op);
  }
}
BENCHMARK(BM_AssembleLShape)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveLShape(benchmark::State& state) {
  const GridOperator op = discretize(l_shape(), grid(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    EigResult r = smallest_eigs_below(op, *op.threshold, 0.1);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SolveLShape)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CountBelowThreshold(benchmark::State& state) {
  const GridOperator op = discretize(l_shape(), grid(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(count_below(op, *op.threshold));
}
BENCHMARK(BM_CountBelowThreshold)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
