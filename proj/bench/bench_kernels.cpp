/*
 * Copyright 2026 The mxpbf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP kernels. Run with MXPBF_THREADS=k (or
// OMP_NUM_THREADS) to set the worker count of the parallel variants.

#include <benchmark/benchmark.h>

#include "mxpbf/kernels.hpp"
#include "mxpbf/mxpbf.hpp"

namespace {

using mxpbf::Index;

Eigen::MatrixXd data(Index n, Index p) {
  return mxpbf::sample_mvn(mxpbf::cov_identity(p), n, 1).values();
}

void BM_GramReference(benchmark::State& state) {
  const Eigen::MatrixXd x = data(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mxpbf::kernels::gram_reference(x));
}

void BM_GramParallel(benchmark::State& state) {
  mxpbf::configure_threads_from_env();
  const Eigen::MatrixXd x = data(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mxpbf::kernels::gram_parallel(x));
}

template <bool Parallel>
void BM_OneSampleMax(benchmark::State& state) {
  mxpbf::configure_threads_from_env();
  const Index n = state.range(0);
  const Index p = state.range(1);
  const mxpbf::GramCache cache = mxpbf::build_gram(data(n, p));
  const auto hp = mxpbf::default_hyperparams(n, p, mxpbf::TestKind::one_sample);
  const mxpbf::OneSampleScorer score(cache, hp);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(
          mxpbf::kernels::max_over_pairs_parallel(p, mxpbf::kernels::PairSet::ordered, score));
    } else {
      benchmark::DoNotOptimize(
          mxpbf::kernels::max_over_pairs_reference(p, mxpbf::kernels::PairSet::ordered, score));
    }
  }
  state.SetItemsProcessed(state.iterations() * p * (p - 1));
}

template <bool Parallel>
void BM_DiagScoreMatrix(benchmark::State& state) {
  mxpbf::configure_threads_from_env();
  const Index n = state.range(0);
  const Index p = state.range(1);
  const mxpbf::GramCache cache = mxpbf::build_gram(data(n, p));
  const mxpbf::DiagScorer score(cache, 1e-6);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(mxpbf::kernels::score_matrix_parallel(p, score));
    } else {
      benchmark::DoNotOptimize(mxpbf::kernels::score_matrix_reference(p, score));
    }
  }
}

const std::vector<std::vector<int64_t>> kShapes = {{100, 200}, {200, 500}, {400, 1000}};

BENCHMARK(BM_GramReference)->ArgsProduct(kShapes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->ArgsProduct(kShapes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OneSampleMax<false>)->Args({100, 500})->Args({200, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OneSampleMax<true>)->Args({100, 500})->Args({200, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiagScoreMatrix<false>)->Args({100, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiagScoreMatrix<true>)->Args({100, 500})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
