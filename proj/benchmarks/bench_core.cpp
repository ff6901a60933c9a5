#include <benchmark/benchmark.h>

#include <cmath>

#include "potopt/analysis.hpp"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

using namespace potopt;

static void BM_SolveLinear(benchmark::State& state) {
  const Grid g = make_interval(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const Field V(g, [](double x) { return 1.0 + x; });
  const Field f(g, [](double) { return 1.0; });
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(V, f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveLinear)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

static void BM_Eigenpairs(benchmark::State& state) {
  const Grid g = make_interval(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const Field V(g, [](double x) { return 10.0 * std::sin(5.0 * x) * std::sin(5.0 * x); });
  for (auto _ : state) benchmark::DoNotOptimize(eigenpairs(V, 2));
}
BENCHMARK(BM_Eigenpairs)->Arg(2001)->Arg(20001);

static void BM_EnergyLp(benchmark::State& state) {
  const Grid g = make_interval(0.0, 1.0, 2001);
  const Field f(g, [](double) { return 1.0; });
  const double p = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_energy_lp(f, p));
}
BENCHMARK(BM_EnergyLp)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_EnergyL1(benchmark::State& state) {
  const Grid g = make_interval(-1.0, 1.0, 2001);
  Field f(g);
  f[1000] = 1.0 / g.weight(1000);
  for (auto _ : state) benchmark::DoNotOptimize(solve_energy_l1(f));
}
BENCHMARK(BM_EnergyL1)->Unit(benchmark::kMillisecond);

static void BM_EnergyInverseLp(benchmark::State& state) {
  const Grid g = make_radial(8.0, 1, 4001);
  const Field f(g, [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
  for (auto _ : state) benchmark::DoNotOptimize(solve_energy_inverse_lp(f, 2.0));
}
BENCHMARK(BM_EnergyInverseLp)->Unit(benchmark::kMillisecond);

static void BM_Lambda1InverseLp(benchmark::State& state) {
  const Grid g = make_radial(6.0, 1, 1501);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lambda1_inverse_lp(g, 1.0));
}
BENCHMARK(BM_Lambda1InverseLp)->Unit(benchmark::kMillisecond);

static void BM_Counterexample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(counterexample_energy(n, 4 * n * n * n));
}
BENCHMARK(BM_Counterexample)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
