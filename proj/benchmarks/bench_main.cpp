#include <benchmark/benchmark.h>

#include <cmath>

#include "stefan/analysis.hpp"
#include "stefan/eigensolver.hpp"
#include "stefan/entire_solutions.hpp"
#include "stefan/fbsolver.hpp"
#include "stefan/periodic_ode.hpp"

using namespace stefan;

namespace {

ModelParams spreading() {
  ModelParams p;
  p.m1 = p.m2 = p.b1 = p.b2 = CoefficientField::constant(1.0, 1.0);
  p.c1 = CoefficientField::constant(1.0, 0.2);
  p.c2 = CoefficientField::constant(1.0, 0.3);
  p.mu = 5.0;
  p.init.h0 = 2.0;
  p.init.u0.shape = RadialProfile::Cosine{0.5};
  p.init.v0.shape = RadialProfile::Constant{1.0};
  return p;
}

const auto kSeasonal = PeriodicScalarFunction::sinusoid(1.0, 1.0, 0.5, 0.0);

void BM_PeriodicLogistic(benchmark::State& st) {
  const auto b = PeriodicScalarFunction::constant(1.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(solve_periodic_logistic(kSeasonal, b, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_PeriodicLogistic)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_PrincipalEigenvalue(benchmark::State& st) {
  EigenSettings s;
  s.grid = static_cast<int>(st.range(0));
  s.steps_per_period = s.grid;
  const auto m = CoefficientField::time_periodic(kSeasonal);
  for (auto _ : st) benchmark::DoNotOptimize(principal_eigenvalue(s.problem(1.0, m, 2.0, 1.0, 1)));
}
BENCHMARK(BM_PrincipalEigenvalue)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ResidentSteadyState(benchmark::State& st) {
  const auto p = spreading();
  for (auto _ : st) benchmark::DoNotOptimize(resident_steady_state(p, 20.0, 1000));
}
BENCHMARK(BM_ResidentSteadyState)->Unit(benchmark::kMillisecond);

void BM_FreeBoundaryStep(benchmark::State& st) {
  const auto p = spreading();
  SolverConfig cfg;
  cfg.Ns = static_cast<int>(st.range(0));
  cfg.Nr = 2000;
  cfg.R_out = 100.0;
  cfg.steps_per_period = 256;
  FreeBoundarySolver solver(p, cfg);
  const auto start = initial_state(p, cfg);
  auto s = start;
  for (auto _ : st) {
    solver.step(s);
    // restart before the front gets near the edge
    if (s.h > 50.0) s = start;
  }
}
BENCHMARK(BM_FreeBoundaryStep)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_SemiWave(benchmark::State& st) {
  const auto b = PeriodicScalarFunction::constant(1.0, 1.0);
  SemiWaveOptions o;
  o.dr = 0.04;
  o.steps_per_period = 64;
  for (auto _ : st) benchmark::DoNotOptimize(semiwave_k0(1.0, kSeasonal, b, 1.0, o));
}
BENCHMARK(BM_SemiWave)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
