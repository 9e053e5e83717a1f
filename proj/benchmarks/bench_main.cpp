#include <benchmark/benchmark.h>

#include "dcres/boundary_ode.hpp"
#include "dcres/evolution.hpp"
#include "dcres/specfun.hpp"

using namespace dcres;

static void BM_Gamma(benchmark::State& state) {
  Complex z(0.3, 2.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_c(z));
    z += Complex(1e-9, 0.0);
  }
}
BENCHMARK(BM_Gamma);

static void BM_Hyp2f1(benchmark::State& state) {
  const ChargeConfig cfg(0.3);
  const auto pair = reduce_to_hypergeometric(cfg, 1, {0.5, -1.2});
  const double x = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(hyp2f1(pair.f, x));
}
BENCHMARK(BM_Hyp2f1)->Arg(10)->Arg(50)->Arg(90)->Arg(99);

static void BM_InhomogeneousSolve(benchmark::State& state) {
  const ChargeConfig cfg(0.3);
  const auto src = ModeSource::bump(0.5, 0.25, 1.0, {0.3, -0.7});
  const auto x = uniform_nodes(0.05, 0.95, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_inhomogeneous(cfg, 1, {1.0, 2.0}, src, x));
}
BENCHMARK(BM_InhomogeneousSolve)->Arg(91)->Arg(181)->Unit(benchmark::kMillisecond);

static void BM_Step(benchmark::State& state) {
  const ChargeConfig cfg(0.3);
  const auto grid = RadialGrid::covering(static_cast<double>(state.range(0)), 0.05);
  RadialField f = RadialField::bump(AngularMode(1, 0.5), grid, 0.75, 0.5, 1.0, -1.0);
  const auto scheme = state.range(1) ? Scheme::kCayley : Scheme::kSplitExact;
  for (auto _ : state) step(f, cfg, 0.05, scheme);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.n));
}
BENCHMARK(BM_Step)->Args({100, 0})->Args({400, 0})->Args({400, 1});

static void BM_ForwardSolve(benchmark::State& state) {
  EvolutionConfig cfg;
  cfg.charge = ChargeConfig(0.3);
  cfg.t_final = static_cast<double>(state.range(0));
  cfg.record_radii = {10, 20, 30};
  const auto grid = RadialGrid::covering(cfg.t_final + 12.0, cfg.dt);
  const auto f = RadialField::bump(AngularMode(1, 0.5), grid, 0.75, 0.5, 1.0, -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(forward_solve(cfg, f));
}
BENCHMARK(BM_ForwardSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
