#include <benchmark/benchmark.h>

#include <vector>

#include "emdcor/baselines.hpp"
#include "emdcor/dependence.hpp"
#include "emdcor/random.hpp"
#include "emdcor/transport.hpp"
#include "emdcor/univariate.hpp"

namespace {

using namespace emdcor;

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; i += 2) {
    const auto [a, b] = rng.normal_pair();
    v[i] = a;
    if (i + 1 < n) v[i + 1] = b;
  }
  return v;
}

PairedSample sample(std::size_t n) {
  return PairedSample::from_reals(normals(n, 1), normals(n, 2));
}

void BM_EmpiricalEcov(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_ecov(s));
}
BENCHMARK(BM_EmpiricalEcov)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SolveTransport(benchmark::State& state) {
  const auto p = build_product_measure(sample(static_cast<std::size_t>(state.range(0)))).problem;
  for (auto _ : state) benchmark::DoNotOptimize(solve_transport(p).total_cost);
}
BENCHMARK(BM_SolveTransport)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ReferenceSolver(benchmark::State& state) {
  const auto p = build_product_measure(sample(static_cast<std::size_t>(state.range(0)))).problem;
  for (auto _ : state) benchmark::DoNotOptimize(solve_transport_reference(p).total_cost);
}
BENCHMARK(BM_ReferenceSolver)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GiniSorted(benchmark::State& state) {
  const auto xs = normals(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(gini_mean_difference(xs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GiniSorted)->RangeMultiplier(8)->Range(64, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_Wasserstein1dUnequal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = normals(n, 4);
  const auto ys = normals(n + n / 3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_1d(xs, ys));
}
BENCHMARK(BM_Wasserstein1dUnequal)->Arg(1000)->Arg(100000);

void BM_DistanceCorrelation(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(distance_correlation(s));
}
BENCHMARK(BM_DistanceCorrelation)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CubeQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cube_evar_erf_integral(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CubeQuadrature)->Arg(1)->Arg(3)->Arg(10);

}  // namespace
BENCHMARK_MAIN();
