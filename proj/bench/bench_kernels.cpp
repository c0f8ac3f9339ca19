// Serial reference vs OpenMP batched tridiagonal kernels on an n x n bipartite block.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gapwave/kernels.hpp"

namespace {

using gapwave::kernels::cd;
namespace k = gapwave::kernels;

struct Fixture {
  k::Tridiag a;
  k::TridiagLU lu;
  std::vector<cd> in, out;

  explicit Fixture(std::size_t n) : in(n * n), out(n * n) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    a.diag.resize(n);
    for (auto& d : a.diag) d = cd(4.0 + u(rng), u(rng));
    a.off = cd(-1.0, 0.2);
    lu = k::factorize(a);
    for (auto& v : in) v = cd(u(rng), u(rng));
  }
};

template <void (*Kernel)(const k::Tridiag&, std::span<const cd>, std::span<cd>, std::size_t, std::size_t)>
void bm_apply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Fixture f(n);
  for (auto _ : state) {
    Kernel(f.a, f.in, f.out, n, n);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

template <void (*Kernel)(const k::TridiagLU&, std::span<cd>, std::size_t, std::size_t)>
void bm_solve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Fixture f(n);
  for (auto _ : state) {
    state.PauseTiming();
    f.out = f.in;
    state.ResumeTiming();
    Kernel(f.lu, f.out, n, n);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

}  // namespace

BENCHMARK(bm_apply<k::serial::apply_columns>)->Name("apply_columns/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_apply<k::omp::apply_columns>)->Name("apply_columns/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_apply<k::serial::apply_rows>)->Name("apply_rows/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_apply<k::omp::apply_rows>)->Name("apply_rows/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_solve<k::serial::solve_columns>)->Name("solve_columns/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_solve<k::omp::solve_columns>)->Name("solve_columns/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_solve<k::serial::solve_rows>)->Name("solve_rows/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(bm_solve<k::omp::solve_rows>)->Name("solve_rows/omp")->RangeMultiplier(2)->Range(128, 1024);

BENCHMARK_MAIN();
