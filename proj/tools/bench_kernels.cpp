// Benchmark of the data-parallel cores against their serial references:
// the mixing product (one simulated communication round) and the per-node
// stacked gradient evaluation.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "decopt/kernels.hpp"
#include "decopt/problems.hpp"
#include "decopt/rng.hpp"

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  decopt::Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

void bench_mix_serial(benchmark::State& state) {
  const int m = (int)state.range(0);
  const int n = (int)state.range(1);
  const auto mixing = random_matrix(m, m, 1);
  const auto x = random_matrix(m, n, 2);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    decopt::kernels::mix_apply_serial(mixing, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bench_mix_omp(benchmark::State& state) {
  const int m = (int)state.range(0);
  const int n = (int)state.range(1);
  const auto mixing = random_matrix(m, m, 1);
  const auto x = random_matrix(m, n, 2);
  Eigen::MatrixXd out;
  decopt::kernels::set_parallel(true);
  for (auto _ : state) {
    decopt::kernels::mix_apply_raw(mixing, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bench_stacked_grad_serial(benchmark::State& state) {
  const int m = (int)state.range(0);
  const auto problem = decopt::problems::make_logistic(m, 32, 256, 0.1, 7);
  const auto x = random_matrix(m, 32, 3);
  for (auto _ : state) {
    auto g = problem.stacked_gradient_serial(x);
    benchmark::DoNotOptimize(g.data());
  }
}

void bench_stacked_grad_omp(benchmark::State& state) {
  const int m = (int)state.range(0);
  const auto problem = decopt::problems::make_logistic(m, 32, 256, 0.1, 7);
  const auto x = random_matrix(m, 32, 3);
  decopt::kernels::set_parallel(true);
  for (auto _ : state) {
    auto g = problem.stacked_gradient(x);
    benchmark::DoNotOptimize(g.data());
  }
}

}  // namespace

BENCHMARK(bench_mix_serial)->Args({64, 100})->Args({256, 512})->Args({512, 1024});
BENCHMARK(bench_mix_omp)->Args({64, 100})->Args({256, 512})->Args({512, 1024});
BENCHMARK(bench_stacked_grad_serial)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(bench_stacked_grad_omp)->Arg(16)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
