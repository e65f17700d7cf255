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

#include "rfidqv/experiments.hpp"
#include "rfidqv/rfid_model.hpp"

using namespace rfidqv;

static void BM_BuildRfid(benchmark::State& state) {
  const auto cfg = rfid::with_population(rfid::RfidModelConfig{}, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto m = rfid::build_rfid_model(cfg);
    benchmark::DoNotOptimize(m.n_states());
    state.counters["states"] = static_cast<double>(m.n_states());
  }
}
BENCHMARK(BM_BuildRfid)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_CountSeries(benchmark::State& state) {
  const auto m = rfid::build_rfid_model(rfid::with_population(rfid::RfidModelConfig{}, 50));
  for (auto _ : state) benchmark::DoNotOptimize(experiments::count_series(m, 2500));
}
BENCHMARK(BM_CountSeries)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
