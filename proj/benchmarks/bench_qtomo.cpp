// Copyright 2026 The qtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qtomo/charts.hpp"
#include "qtomo/inference.hpp"
#include "qtomo/likelihood.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/selection.hpp"
#include "qtomo/states.hpp"
#include "qtomo/stats.hpp"

namespace {

using namespace qtomo;

Matrix upper_factor(int rank, int dim, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  Matrix t = complex_gaussian(rank, dim, rng);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < i; ++j) t(i, j) = 0.0;
  return t;
}

void BM_LoglikGradient(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int rank = static_cast<int>(state.range(1));
  const CountsDataset data = simulate_dataset(random_state(k, 2, 1), 100, 1);
  const LikelihoodModel model(data);
  const Matrix t = upper_factor(rank, pow2(k), 2);
  Matrix grad;
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(t, &grad, 1e-12));
}
BENCHMARK(BM_LoglikGradient)->Args({2, 2})->Args({4, 1})->Args({4, 4})->Args({4, 16});

void BM_DenseLoglik(benchmark::State& state) {
  const CountsDataset data = simulate_dataset(random_state(4, 2, 1), 100, 1);
  const DensityMatrix rho = random_state(4, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(rho, data));
}
BENCHMARK(BM_DenseLoglik);

void BM_FitRank(benchmark::State& state) {
  const int rank = static_cast<int>(state.range(0));
  const CountsDataset data = simulate_dataset(random_significant_state(4, 2, 1), 100, 1);
  FitOptions opt;
  opt.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(fit_rank(data, rank, opt).loglik);
}
BENCHMARK(BM_FitRank)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ScanRanks(benchmark::State& state) {
  const CountsDataset data = simulate_dataset(random_significant_state(4, 2, 1), 100, 1);
  ScanOptions opt;
  opt.max_rank = 4;
  for (auto _ : state) benchmark::DoNotOptimize(scan_ranks(data, opt).selected_rank_bic);
}
BENCHMARK(BM_ScanRanks)->Unit(benchmark::kMillisecond);

void BM_FisherInformation(benchmark::State& state) {
  const PureStateChart chart(haar_random_vector(static_cast<int>(state.range(0)), 7));
  for (auto _ : state) benchmark::DoNotOptimize(fisher_information(chart).sum());
}
BENCHMARK(BM_FisherInformation)->Arg(2)->Arg(4);

void BM_Simulate(benchmark::State& state) {
  const DensityMatrix rho = random_state(4, 3, 1);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_dataset(rho, 100, ++seed).total());
}
BENCHMARK(BM_Simulate);

}  // namespace

BENCHMARK_MAIN();
