#include <benchmark/benchmark.h>

#include "wavegeom/kernel.hpp"
#include "wavegeom/parametrix.hpp"
#include "wavegeom/quadrature.hpp"

using namespace wavegeom;

namespace {

const SpacetimeMetric& flat_metric() {
  static const SpacetimeMetric m = SpacetimeMetric::make(MetricSpec{});
  return m;
}

const SpacetimeMetric& bump_metric() {
  static const SpacetimeMetric m = [] {
    MetricSpec s;
    s.family = "bump";
    s.epsilon = 0.05;
    return SpacetimeMetric::make(s);
  }();
  return m;
}

void BM_ChristoffelAnalytic(benchmark::State& state) {
  const auto& m = bump_metric();
  const Vec3 x{0.4, -0.3, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(m.christoffel(0.5, x));
}
BENCHMARK(BM_ChristoffelAnalytic);

void BM_OpticalEvaluatePerturbed(benchmark::State& state) {
  OpticalSolver solver(bump_metric());
  const Vec3 x{0.4, -0.3, 0.6};
  const Vec3 w = normalized(Vec3{0.2, 0.5, 0.84});
  for (auto _ : state) benchmark::DoNotOptimize(solver.evaluate(0.7, x, w));
}
BENCHMARK(BM_OpticalEvaluatePerturbed);

void BM_OpticalEvaluateFlatGeneric(benchmark::State& state) {
  SolverOptions opt;
  opt.flat_closed_form = false;
  OpticalSolver solver(flat_metric(), opt);
  const Vec3 x{0.4, -0.3, 0.6};
  const Vec3 w = normalized(Vec3{0.2, 0.5, 0.84});
  for (auto _ : state) benchmark::DoNotOptimize(solver.evaluate(0.7, x, w));
}
BENCHMARK(BM_OpticalEvaluateFlatGeneric);

void BM_OmegaDerivatives(benchmark::State& state) {
  OpticalSolver solver(bump_metric());
  const Vec3 x{0.3, 0.1, -0.5};
  const Vec3 w = normalized(Vec3{-0.4, 0.6, 0.69});
  for (auto _ : state) benchmark::DoNotOptimize(solver.omega_derivatives(0.6, x, w));
}
BENCHMARK(BM_OmegaDerivatives);

void BM_SphereRule(benchmark::State& state) {
  const int nt = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sphere_rule(Vec3{0, 0, 1}, nt, 2 * nt));
}
BENCHMARK(BM_SphereRule)->Arg(16)->Arg(64);

void BM_ParametrixRadialPoint(benchmark::State& state) {
  OpticalSolver solver(flat_metric());
  ParametrixEvaluator ev(solver, DyadicWindow{static_cast<int>(state.range(0))},
                         FrequencyProfile::parse("one", "const"));
  for (auto _ : state) benchmark::DoNotOptimize(ev.flat_radial_abs(0.6, 0.55, 0));
}
BENCHMARK(BM_ParametrixRadialPoint)->Arg(3)->Arg(6);

void BM_KernelFlatReduced(benchmark::State& state) {
  OpticalSolver solver(flat_metric());
  KernelEvaluator kern(solver, KernelConfig{4, nullptr});
  RescaledPair pair{0.0, Vec3{0, 0, 0}, 6.0, Vec3{0, 0, 5.7}};
  for (auto _ : state) benchmark::DoNotOptimize(kern.value_flat_reduced(pair));
}
BENCHMARK(BM_KernelFlatReduced);

void BM_KernelPerturbed(benchmark::State& state) {
  OpticalSolver solver(bump_metric());
  KernelEvaluator kern(solver, KernelConfig{3, nullptr});
  RescaledPair pair{0.0, Vec3{0, 0, 0}, 3.0, Vec3{0, 0, 2.85}};
  for (auto _ : state) benchmark::DoNotOptimize(kern.eval(pair));
}
BENCHMARK(BM_KernelPerturbed);

}  // namespace

BENCHMARK_MAIN();
