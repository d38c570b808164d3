#include <benchmark/benchmark.h>

#include <lrmap/continuous.hpp>
#include <lrmap/kernel.hpp>
#include <lrmap/linalg.hpp>
#include <lrmap/rng.hpp>
#include <lrmap/solver.hpp>

#include <cmath>

using namespace lrmap;

namespace {

void bm_solve_lowrank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Matrix x = rng.gaussian_matrix(n, n);
  const Matrix y = rng.gaussian_matrix(n, n);
  const int k = std::max(1, n / 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_lowrank(x, y, k, SchattenP::hilbert_schmidt()));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_solve_lowrank)->RangeMultiplier(4)->Range(8, 128)->Complexity();

void bm_solve_wide(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Rng rng(2);
  const Matrix x = rng.gaussian_matrix(8, q);
  const Matrix y = rng.gaussian_matrix(8, q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_lowrank(x, y, 4, SchattenP::hilbert_schmidt()));
  }
}
BENCHMARK(bm_solve_wide)->RangeMultiplier(4)->Range(64, 4096);

void bm_schatten_norm(benchmark::State& state) {
  Rng rng(3);
  const Matrix a = rng.gaussian_matrix(64, 64);
  const SchattenP p =
      state.range(0) == 0 ? SchattenP::spectral() : SchattenP(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(schatten_norm(a, p));
  }
}
BENCHMARK(bm_schatten_norm)->Arg(1)->Arg(2)->Arg(0);

void bm_kernel_solve(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Rng rng(4);
  const Matrix x = rng.gaussian_matrix(3, q);
  const Matrix y = rng.gaussian_matrix(3, q);
  const KernelSpec kern = KernelSpec::gaussian(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_lowrank_solve(kern, x, y, 8));
  }
}
BENCHMARK(bm_kernel_solve)->RangeMultiplier(4)->Range(16, 256);

void bm_continuous_refine(benchmark::State& state) {
  HsKernel kx;
  kx.output_dim = 2;
  kx.eval = [](const Vector& u) {
    Vector v(2);
    v << 1.0, u(0);
    return v;
  };
  HsKernel ky;
  ky.output_dim = 2;
  ky.eval = [](const Vector& u) {
    Vector v(2);
    v << std::exp(u(0)), std::cos(3.0 * u(0));
    return v;
  };
  const RuleFamily family = [](int q) {
    return composite_trapezoid(q, 0.0, 1.0);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(refine_to_convergence(
        kx, ky, 1, SchattenP::hilbert_schmidt(), family, 4, 65536, 1e-6));
  }
}
BENCHMARK(bm_continuous_refine);

}  // namespace

BENCHMARK_MAIN();
