#include <benchmark/benchmark.h>

#include "gkdv/hopf.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;

namespace {

Field gaussian_field(std::size_t n) {
  return InitialDatum::gaussian(1.0, 2.0).sample(make_grid(n, 40.0));
}

void BM_SpectralDerivative(benchmark::State& state) {
  const Field f = gaussian_field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_derivative(f, 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralDerivative)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_NonlinearTerm(benchmark::State& state) {
  const Field f = gaussian_field(static_cast<std::size_t>(state.range(0)));
  const FluxModel m = quadratic_model();
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_term(f, m, true));
}
BENCHMARK(BM_NonlinearTerm)->RangeMultiplier(4)->Range(256, 16384);

void BM_Evolve(benchmark::State& state) {
  const Field f = gaussian_field(1024);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.scheme = state.range(0) == 0 ? Scheme::IfRk4 : Scheme::Etdrk4;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(f, kdv_model(), DispersionParams({1e-2}), cfg));
  state.SetLabel(to_string(cfg.scheme));
}
BENCHMARK(BM_Evolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveHopf(benchmark::State& state) {
  const Grid g = make_grid(static_cast<std::size_t>(state.range(0)), 40.0);
  const InitialDatum phi = InitialDatum::gaussian(1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_hopf(phi, kdv_model(), 1.0, g));
}
BENCHMARK(BM_SolveHopf)->RangeMultiplier(4)->Range(256, 16384);

void BM_SobolevNorm(benchmark::State& state) {
  const Field f = gaussian_field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(f, SobolevIndex(3.0)));
}
BENCHMARK(BM_SobolevNorm)->RangeMultiplier(4)->Range(256, 16384);

}  // namespace
BENCHMARK_MAIN();
