#include <benchmark/benchmark.h>

#include "overdet/dirichlet_spectrum.hpp"
#include "overdet/dtn_bifurcation.hpp"
#include "overdet/radial_solver.hpp"
#include "overdet/special_functions.hpp"

namespace {

using namespace overdet;

void BM_BesselJ(benchmark::State& state) {
  const auto order = special::BesselOrder::from_twice(static_cast<int>(state.range(0)));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel_j(order, x));
    x = x < 40.0 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(1)->Arg(12)->Arg(25);

void BM_AppendixTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(special::appendix_table(4, 6));
}
BENCHMARK(BM_AppendixTable)->Unit(benchmark::kMicrosecond);

// Argument: rho as a per-mille fraction of rho_max.
void BM_SolveRadial(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto params = radial::ProblemParams::from_rho(dim, 1e-3 * state.range(1) * radial::rho_max(dim));
  for (auto _ : state) benchmark::DoNotOptimize(radial::solve_radial(params));
}
BENCHMARK(BM_SolveRadial)->Args({2, 500})->Args({3, 500})->Args({3, 50})->Unit(benchmark::kMillisecond);

void BM_ModeEigenvalues(benchmark::State& state) {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(3, 0.5 * radial::rho_max(3)));
  const auto op = spectrum::ModeOperator::from_solution(sol, symmetry::gamma(6, 3));
  spectrum::EigenOptions opts;
  opts.cross_check = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::mode_eigenvalues(op, 2, opts));
}
BENCHMARK(BM_ModeEigenvalues)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Tau1(benchmark::State& state) {
  const auto sol = radial::solve_radial(radial::ProblemParams::from_rho(3, 0.5 * radial::rho_max(3)));
  const symmetry::SymmetryGroup ih(symmetry::IcosahedralFull{});
  for (auto _ : state) benchmark::DoNotOptimize(dtn::tau1(sol, ih));
}
BENCHMARK(BM_Tau1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
