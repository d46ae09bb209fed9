#include <benchmark/benchmark.h>

#include "streampca/estimators.hpp"
#include "streampca/oracle.hpp"
#include "streampca/random.hpp"

namespace {

using namespace streampca;

Matrix normals(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

// Args: d, k. Block size is fixed at 5.
void BM_GramApply(benchmark::State& state) {
  const Index d = state.range(0);
  const Index k = state.range(1);
  const DataBlock block(normals(d, 5, 1), 0);
  const Matrix w = init_basis(d, k, 2).matrix();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_apply(block, w));
  }
}
BENCHMARK(BM_GramApply)->Args({100, 1})->Args({1000, 10})->Args({36000, 20});

void BM_Accelerate(benchmark::State& state) {
  const Index d = state.range(0);
  const Index k = state.range(1);
  const Matrix w_tilde = normals(d, k, 3);
  const EigenBasis w = init_basis(d, k, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(accelerate(w_tilde, w, 2.0));
  }
}
BENCHMARK(BM_Accelerate)->Args({100, 1})->Args({1000, 10})->Args({36000, 20});

void BM_Orthonormalize(benchmark::State& state) {
  const Matrix m = normals(state.range(0), state.range(1), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(orthonormalize(m));
  }
}
BENCHMARK(BM_Orthonormalize)->Args({100, 1})->Args({1000, 10})->Args({36000, 20});

// Args: d, k, accelerate.
void BM_EstimatorStep(benchmark::State& state) {
  const Index d = state.range(0);
  const Index k = state.range(1);
  EstimatorOptions opts;
  opts.accelerate = state.range(2) != 0;
  Estimator est(init_basis(d, k, 6), opts, 7);
  const DataBlock block(normals(d, 5, 8), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.step(block));
  }
}
BENCHMARK(BM_EstimatorStep)->Args({100, 1, 0})->Args({100, 1, 1})->Args({1000, 10, 1});

// Args: d, n. The Gram path kicks in when n < d.
void BM_BatchPca(benchmark::State& state) {
  const Matrix x = normals(state.range(0), state.range(1), 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch_pca(x, 10));
  }
}
BENCHMARK(BM_BatchPca)->Args({100, 10000})->Args({1000, 200})->Args({5000, 300})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
