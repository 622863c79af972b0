// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "spinwave/kernels.hpp"
#include "spinwave/spectrum.hpp"

using namespace spinwave;
using namespace spinwave::kernels;

namespace {

CouplingParams near_critical() {
  const CouplingParams p;
  return p.with_equal_coupling(0.999 * critical_g_equal(p));
}

template <auto Kernel>
void BM_MomentSums(benchmark::State& state) {
  const auto p = near_critical();
  const ZoneCorner corner = minimizing_corner(p);
  const int n = static_cast<int>(state.range(0));
  const auto x = uniform_axis(n, corner.kx()), y = uniform_axis(n, corner.ky());
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p, corner, x, y, 20, 20));
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <auto Kernel>
void BM_SymbolGrid(benchmark::State& state) {
  const auto p = near_critical();
  const ZoneCorner corner = minimizing_corner(p);
  const int n = static_cast<int>(state.range(0));
  const auto x = uniform_axis(n, corner.kx()), y = uniform_axis(n, corner.ky());
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (auto _ : state) {
    Kernel(p, corner, x, y, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

}  // namespace

BENCHMARK(BM_MomentSums<serial::moment_sums>)->Name("moment_sums/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_MomentSums<omp::moment_sums>)->Name("moment_sums/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_SymbolGrid<serial::symbol_grid>)->Name("symbol_grid/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_SymbolGrid<omp::symbol_grid>)->Name("symbol_grid/omp")->RangeMultiplier(2)->Range(128, 1024);

BENCHMARK_MAIN();
