#include <benchmark/benchmark.h>

#include "bbm/inflation.hpp"
#include "bbm/random_data.hpp"
#include "bbm/solver.hpp"
#include "bbm/spectral.hpp"

using namespace bbm;

namespace {

SpectralField rough(int M, std::uint64_t seed = 1) { return sample_initial_data({Family::gaussian, 0.5, M, seed, {}}); }

void BM_Product(benchmark::State& st) {
  int M = static_cast<int>(st.range(0));
  SpectralField u = rough(M, 1), v = rough(M, 2);
  for (auto _ : st) benchmark::DoNotOptimize(product(u, v, M));
  st.SetComplexityN(M);
}
BENCHMARK(BM_Product)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_ProductDirect(benchmark::State& st) {
  int M = static_cast<int>(st.range(0));
  SpectralField u = rough(M, 1), v = rough(M, 2);
  for (auto _ : st) benchmark::DoNotOptimize(product_direct(u, v, M));
  st.SetComplexityN(M);
}
BENCHMARK(BM_ProductDirect)->RangeMultiplier(4)->Range(64, 1024)->Complexity(benchmark::oNSquared);

// One RK4 step per iteration.
void BM_SolverStep(benchmark::State& st) {
  SolverConfig c;
  c.M_grid = static_cast<int>(st.range(0));
  c.dt = 1e-3;
  c.T_final = 1e-3;
  SpectralField u0 = rough(c.M_grid);
  for (auto _ : st) benchmark::DoNotOptimize(integrate_bbm(u0, c));
}
BENCHMARK(BM_SolverStep)->RangeMultiplier(2)->Range(64, 2048);

void BM_Xi1Exact(benchmark::State& st) {
  InflationParams ip;
  ip.N = static_cast<double>(st.range(0));
  ip.A = ip.N / 32.0;
  ip.R = 1.0;
  SpectralField data = build_inflation_data(ip, static_cast<int>(ip.N) + 64);
  for (auto _ : st) benchmark::DoNotOptimize(xi1_exact(data, 0.01));
}
BENCHMARK(BM_Xi1Exact)->RangeMultiplier(2)->Range(128, 1024);

void BM_Sampling(benchmark::State& st) {
  int M = static_cast<int>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(rough(M, ++seed));
  st.SetItemsProcessed(st.iterations() * M);
}
BENCHMARK(BM_Sampling)->RangeMultiplier(4)->Range(64, 16384);

}  // namespace

BENCHMARK_MAIN();
