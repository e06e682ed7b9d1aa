// Microbenchmarks for the hot paths: the flow itself, the orbit cocycle and
// its inverse, leaf functionals, holonomy cycles, and the full rate report.
// Inputs are fixed (seeded) so numbers are comparable across runs.

#include <benchmark/benchmark.h>

#include <phlab/analysis.hpp>
#include <phlab/su_path.hpp>

namespace {

using namespace phlab;

const CatSuspension& model() {
  static CatSuspension m;
  return m;
}

const TimeChange& bump_tau() {
  static TimeChange tau(1.0, {{0.3, {1, 0}, 0.0}});
  return tau;
}

PhasePoint fixed_point() {
  Rng rng(12345);
  return model().sample(rng);
}

void BM_flow(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  for (auto _ : state) benchmark::DoNotOptimize(m.flow(p, 10.0));
}
BENCHMARK(BM_flow);

void BM_dflow(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  const TangentVector v{0.3, -0.4, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(m.dflow(p, v, 10.0));
}
BENCHMARK(BM_dflow);

void BM_v_cocycle(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  for (auto _ : state)
    benchmark::DoNotOptimize(v_cocycle(m, bump_tau(), p, 5.0, 1e-10));
}
BENCHMARK(BM_v_cocycle);

void BM_alpha(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  for (auto _ : state) benchmark::DoNotOptimize(alpha(m, bump_tau(), p, 5.0, 1e-10));
}
BENCHMARK(BM_alpha);

void BM_beta_stable(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  for (auto _ : state)
    benchmark::DoNotOptimize(beta_s(m, bump_tau(), p, 0.05, 1e-10));
}
BENCHMARK(BM_beta_stable);

void BM_holonomy_quad(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  for (auto _ : state)
    benchmark::DoNotOptimize(holonomy_displacement(m, bump_tau(), p, 0.05, 0.05, 1e-10));
}
BENCHMARK(BM_holonomy_quad);

void BM_transport_composed(benchmark::State& state) {
  const auto& m = model();
  SuPath path;
  path.start = fixed_point();
  path.legs = {{LegKind::stable, 0.07}, {LegKind::unstable, -0.05},
               {LegKind::stable, -0.06}, {LegKind::unstable, 0.08}};
  for (auto _ : state)
    benchmark::DoNotOptimize(transport_composed(m, bump_tau(), path, 1e-10));
}
BENCHMARK(BM_transport_composed);

void BM_finite_time_rates(benchmark::State& state) {
  const auto& m = model();
  const PhasePoint p = fixed_point();
  for (auto _ : state)
    benchmark::DoNotOptimize(finite_time_rates(m, bump_tau(), p, 10.0, 1e-8));
}
BENCHMARK(BM_finite_time_rates);

}  // namespace

BENCHMARK_MAIN();
