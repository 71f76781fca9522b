// Hot paths of the laboratory: the envelope sweep, the full weak solve, the
// level-set quadratures, one dynamic-programming subproblem and the
// p-harmonic profile. Grid size is the benchmark argument where it matters.
#include <benchmark/benchmark.h>

#include "imcf/flow.hpp"
#include "imcf/hawking.hpp"
#include "imcf/numeric.hpp"
#include "imcf/p_approx.hpp"
#include "imcf/presets.hpp"
#include "imcf/rng.hpp"
#include "imcf/variational.hpp"

namespace {

std::vector<double> noisy_values(std::size_t n) {
  imcf::Rng rng(17);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(0.5, 5.0);
  return v;
}

void BM_ForwardInfimum(benchmark::State& state) {
  const auto v = noisy_values(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(imcf::forward_infimum(v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardInfimum)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_SolveWeakImcf(benchmark::State& state) {
  const auto f = imcf::preset("neck");
  for (auto _ : state)
    benchmark::DoNotOptimize(imcf::solve_weak_imcf(f, 1.0, std::size_t(state.range(0))));
}
BENCHMARK(BM_SolveWeakImcf)->Arg(1 << 12)->Arg(1 << 14)->Arg(1 << 16);

void BM_HawkingTrace(benchmark::State& state) {
  const auto f = imcf::preset("schwarzschild");
  const auto sol = imcf::solve_weak_imcf(f, 3.0, std::size_t(state.range(0)));
  const auto ts = imcf::linspace(0.0, 4.0, 256);
  for (auto _ : state) benchmark::DoNotOptimize(imcf::hawking_trace(sol, f, ts));
}
BENCHMARK(BM_HawkingTrace)->Arg(1 << 12)->Arg(1 << 14);

void BM_BulkIntegral(benchmark::State& state) {
  const auto f = imcf::preset("euclidean");
  const auto sol = imcf::solve_weak_imcf(f, 1.0, std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(imcf::bulk_integral(sol, f, 4.0));
}
BENCHMARK(BM_BulkIntegral)->Arg(1 << 12)->Arg(1 << 14);

void BM_MinimalityTrial(benchmark::State& state) {
  const auto f = imcf::preset("neck");
  const auto sol = imcf::solve_weak_imcf(f, 1.0, 4096);
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(imcf::minimality_check(sol, f, 16, 1e-8, seed++));
}
BENCHMARK(BM_MinimalityTrial);

void BM_FixedPointSolve(benchmark::State& state) {
  const auto f = imcf::preset("euclidean");
  for (auto _ : state)
    benchmark::DoNotOptimize(imcf::fixed_point_solve(f, 1.0, std::size_t(state.range(0))));
}
BENCHMARK(BM_FixedPointSolve)->Unit(benchmark::kMillisecond)->Arg(256)->Arg(512);

void BM_PHarmonicProfile(benchmark::State& state) {
  const auto f = imcf::preset("euclidean");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        imcf::p_harmonic_radial(f, 1.0, 1.05, 25.0, std::size_t(state.range(0))));
}
BENCHMARK(BM_PHarmonicProfile)->Arg(1 << 12)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
