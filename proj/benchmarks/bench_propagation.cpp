#include "covprop/covariance.hpp"
#include "covprop/jacobi_eigen.hpp"
#include "covprop/schemes.hpp"

#include <benchmark/benchmark.h>

using namespace covprop;

namespace {

void BM_BuildPropagator(benchmark::State& state) {
  const Grid g = build_grid(static_cast<int>(state.range(0)));
  const TimeStepping ts = timestep_from_cfl(1.0, g);
  const auto scheme = state.range(1) ? Scheme::CrankNicolson : Scheme::LaxWendroff;
  for (auto _ : state) benchmark::DoNotOptimize(build_propagator(scheme, 1.0, g, ts));
}
BENCHMARK(BM_BuildPropagator)->ArgsProduct({{100, 200, 400}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TraditionalStep(benchmark::State& state) {
  const Grid g = build_grid(static_cast<int>(state.range(0)));
  const TimeStepping ts = timestep_from_cfl(1.0, g);
  const auto m = build_propagator(Scheme::CrankNicolson, 1.0, g, ts);
  const auto p0 = build_initial_covariance(CorrelationKernel::gaspari_cohn(0.25), VarianceProfile(), g);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_traditional(p0, m, 1));
}
BENCHMARK(BM_TraditionalStep)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PolarStep(benchmark::State& state) {
  const Grid g = build_grid(static_cast<int>(state.range(0)));
  const TimeStepping ts = timestep_from_cfl(1.0, g);
  const auto u = build_propagator(Scheme::CrankNicolson, 0.5, g, ts);
  const auto p0 = build_initial_covariance(CorrelationKernel::gaspari_cohn(0.25), VarianceProfile(), g);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_polar(p0, u, g, 1, ts));
}
BENCHMARK(BM_PolarStep)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Jacobi(benchmark::State& state) {
  const Grid g = build_grid(static_cast<int>(state.range(0)));
  const auto p = build_initial_covariance(CorrelationKernel::foar(0.25), VarianceProfile(), g);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(p.entries));
}
BENCHMARK(BM_Jacobi)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
