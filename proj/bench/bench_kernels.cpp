// Serial reference against the OpenMP kernels. Run with OMP_NUM_THREADS set
// to compare thread counts; on one core the two should be close.

#include <benchmark/benchmark.h>

#include "sphlaw/lattice.hpp"
#include "sphlaw/numutil.hpp"
#include "sphlaw/tetra.hpp"

using namespace sphlaw;

namespace {

darboux::BoundaryData boundary(int n) {
  return darboux::random_boundary({n, n, n}, darboux::Variant::symmetric, 0.1, 42);
}

void BM_LatticeSerial(benchmark::State& st) {
  const auto b = boundary(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(darboux::serial::lattice_evolve(b));
  st.SetItemsProcessed(st.iterations() * b.extent.cubes());
}

void BM_LatticeParallel(benchmark::State& st) {
  const auto b = boundary(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(darboux::parallel::lattice_evolve(b));
  st.SetItemsProcessed(st.iterations() * b.extent.cubes());
}

void BM_ResidualSerial(benchmark::State& st) {
  const auto f = darboux::serial::lattice_evolve(boundary(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(darboux::serial::lattice_residual(f));
}

void BM_ResidualParallel(benchmark::State& st) {
  const auto f = darboux::serial::lattice_evolve(boundary(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(darboux::parallel::lattice_residual(f));
}

// Sweep kernel: the psi Jacobian determinant identity over sampled inputs.
template <bool Parallel>
void BM_Sweep(benchmark::State& st) {
  const auto xs = num::sample_tetra(7, static_cast<int>(st.range(0)));
  const num::ResidualFn res = [&](long i) {
    const auto& x = xs[static_cast<std::size_t>(i)];
    return std::abs(tetra::jacobian_psi(x).det / tetra::jacobian_det_factorized(x) - 1.0);
  };
  const num::InputFn in = [&](long i) { return std::vector<double>(xs[i].begin(), xs[i].end()); };
  const long n = static_cast<long>(xs.size());
  for (auto _ : st) {
    if constexpr (Parallel) benchmark::DoNotOptimize(num::parallel::sweep("psi.det", 1e-9, n, res, in));
    else benchmark::DoNotOptimize(num::serial::sweep("psi.det", 1e-9, n, res, in));
  }
  st.SetItemsProcessed(st.iterations() * n);
}

}  // namespace

BENCHMARK(BM_LatticeSerial)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeParallel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<false>)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<true>)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
