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

#include "rfidqv/protocol.hpp"

using namespace rfidqv;

static void BM_Hash(benchmark::State& state) {
  protocol::ProtocolConfig cfg;
  cfg.l = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto x = BitString::random(2 * cfg.l, rng);
  for (auto _ : state) benchmark::DoNotOptimize(protocol::hash(cfg, x));
}
BENCHMARK(BM_Hash)->Arg(128)->Arg(512)->Arg(2048);

// One full session against a database of n records, matching the last one.
static void BM_Session(benchmark::State& state) {
  protocol::ProtocolConfig cfg;
  cfg.l = 128;
  Rng rng(1);
  std::vector<protocol::ServerRecord> db;
  std::vector<protocol::TagState> tags;
  for (int i = 0; i < state.range(0); ++i) {
    const auto u = BitString::random(cfg.l, rng);
    db.push_back(protocol::make_record(cfg, u));
    tags.push_back(protocol::make_tag(cfg, u));
  }
  for (auto _ : state) benchmark::DoNotOptimize(protocol::run_session(cfg, tags.back(), db, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Session)->Arg(1)->Arg(10)->Arg(100);

BENCHMARK_MAIN();
