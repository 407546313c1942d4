/*
 * Copyright 2026 The kgp Authors
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

// Parallel kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include "kgp/dependence.hpp"
#include "kgp/quadrature.hpp"
#include "kgp/reference.hpp"
#include "kgp/rng.hpp"

namespace {

using namespace kgp;

Points points(Eigen::Index n, Eigen::Index d) {
  Rng rng = make_rng(1, 0);
  return uniform_points(rng, n, d, 0.0, 1.0);
}

void BM_Gram(benchmark::State& state) {
  const Points X = points(state.range(0), 3);
  const Kernel k = Kernel::matern(2.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gram(k, X));
}

void BM_GramSerial(benchmark::State& state) {
  const Points X = points(state.range(0), 3);
  const Kernel k = Kernel::matern(2.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(reference::gram(k, X));
}

void BM_FillDistance(benchmark::State& state) {
  const Points X = points(64, 2);
  const Vector x = Vector::Constant(2, 0.5);
  const double res = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fill_distance(Box::unit(2), X, x, 0.5, res));
}

void BM_FillDistanceSerial(benchmark::State& state) {
  const Points X = points(64, 2);
  const Vector x = Vector::Constant(2, 0.5);
  const double res = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::fill_distance(Box::unit(2), X, x, 0.5, res));
}

void BM_Hsic(benchmark::State& state) {
  const PairedSample s{points(state.range(0), 2), points(state.range(0), 1)};
  const Kernel k = Kernel::square_exponential(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hsic_empirical(k, k, s));
}

void BM_HsicDoubleSum(benchmark::State& state) {
  const PairedSample s{points(state.range(0), 2), points(state.range(0), 1)};
  const Kernel k = Kernel::square_exponential(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(reference::hsic_double_sum(k, k, s));
}

}  // namespace

BENCHMARK(BM_Gram)->Arg(256)->Arg(1024);
BENCHMARK(BM_GramSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_FillDistance)->Arg(256)->Arg(1024);
BENCHMARK(BM_FillDistanceSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_Hsic)->Arg(200);
BENCHMARK(BM_HsicDoubleSum)->Arg(200);

BENCHMARK_MAIN();
