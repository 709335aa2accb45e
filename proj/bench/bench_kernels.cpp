#include <benchmark/benchmark.h>

#include <random>

#include "adahuber/kernels.hpp"
#include "adahuber/solver_lamm.hpp"

using namespace adahuber;

namespace {

struct Problem {
  Matrix x;
  Vector y, beta, w, r;
};

Problem make(Index n, Index p) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  Problem pr{Matrix(n, p), Vector(n), Vector(p), Vector(n), Vector()};
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) pr.x(i, j) = z(rng);
  for (Index i = 0; i < n; ++i) {
    pr.y[i] = 3 * z(rng);
    pr.w[i] = std::abs(z(rng));
  }
  for (Index j = 0; j < p; ++j) pr.beta[j] = z(rng);
  kernels::serial::residuals(pr.x, pr.y, pr.beta, pr.r);
  return pr;
}

template <bool Parallel>
void BM_ScoreGradient(benchmark::State& state) {
  const Problem pr = make(state.range(0), state.range(1));
  Vector g;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::score_gradient(pr.x, pr.r, 1.0, g);
    else kernels::serial::score_gradient(pr.x, pr.r, 1.0, g);
    benchmark::DoNotOptimize(g.data());
  }
}

template <bool Parallel>
void BM_Residuals(benchmark::State& state) {
  const Problem pr = make(state.range(0), state.range(1));
  Vector r;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::residuals(pr.x, pr.y, pr.beta, r);
    else kernels::serial::residuals(pr.x, pr.y, pr.beta, r);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_WeightedGram(benchmark::State& state) {
  const Problem pr = make(state.range(0), state.range(1));
  for (auto _ : state) {
    Matrix h = Parallel ? kernels::weighted_gram(pr.x, pr.w) : kernels::serial::weighted_gram(pr.x, pr.w);
    benchmark::DoNotOptimize(h.data());
  }
}

void BM_FitL1(benchmark::State& state) {
  const Problem pr = make(state.range(0), state.range(1));
  const Dataset data(pr.x, pr.y);
  for (auto _ : state) {
    FitResult f = fit_l1_huber(data, HuberParams{2.0, 0.3, {}});
    benchmark::DoNotOptimize(f.beta.data());
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({10000, 10})->Args({100000, 10})->Args({20000, 200});
}

}  // namespace

BENCHMARK(BM_Residuals<false>)->Apply(sizes);
BENCHMARK(BM_Residuals<true>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_ScoreGradient<false>)->Apply(sizes);
BENCHMARK(BM_ScoreGradient<true>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_WeightedGram<false>)->Apply(sizes);
BENCHMARK(BM_WeightedGram<true>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_FitL1)->Args({200, 1000})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
