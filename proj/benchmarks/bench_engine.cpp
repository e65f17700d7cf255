/*
 * Copyright 2026 The rfidqv Authors
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

#include <benchmark/benchmark.h>

#include <vector>

#include "rfidqv/analysis.hpp"

using namespace rfidqv;

namespace {

// Biased walk on 0..n-1 with absorbing ends.
dtmc::Dtmc walk(std::size_t n) {
  std::vector<Triplet> t{{0, 0, 1.0}, {n - 1, n - 1, 1.0}};
  for (std::size_t s = 1; s + 1 < n; ++s) {
    t.push_back({s, s - 1, 0.45});
    t.push_back({s, s + 1, 0.55});
  }
  return dtmc::Dtmc(n, n / 2, SparseMatrix::from_triplets(n, n, t));
}

// Lazy ring, aperiodic with a unique stationary distribution.
dtmc::Dtmc ring(std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t s = 0; s < n; ++s) {
    t.push_back({s, s, 0.5});
    t.push_back({s, (s + 1) % n, 0.3});
    t.push_back({s, (s + n - 1) % n, 0.2});
  }
  return dtmc::Dtmc(n, 0, SparseMatrix::from_triplets(n, n, t));
}

}  // namespace

static void BM_ProbUntil(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = walk(n);
  const auto target = dtmc::make_set(n, {n - 1});
  for (auto _ : state) benchmark::DoNotOptimize(dtmc::prob_until(d, dtmc::all_states(n), target));
}
BENCHMARK(BM_ProbUntil)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_BoundedUntil(benchmark::State& state) {
  const std::size_t n = 10'000;
  const auto d = walk(n);
  const auto target = dtmc::make_set(n, {n - 1});
  const auto t = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dtmc::prob_bounded_until(d, dtmc::all_states(n), target, t));
}
BENCHMARK(BM_BoundedUntil)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SteadyState(benchmark::State& state) {
  const auto d = ring(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dtmc::steady_state_distribution(d));
}
BENCHMARK(BM_SteadyState)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
