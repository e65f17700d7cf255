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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "rfidqv/dtmc.hpp"
#include "rfidqv/pctl.hpp"

namespace rfidqv::sim {

struct SimReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  /// Runs stopped by the step cap before the path's value was decided.
  std::size_t capped_runs = 0;

  bool unreliable() const { return capped_runs > 0; }
  /// Too few runs for the normal approximation behind std_error.
  bool low_confidence() const { return runs < 30; }
};

struct SimOptions {
  std::size_t runs = 100'000;
  std::uint64_t seed = 1;
  std::size_t step_cap = 1'000'000;
  /// Long-run queries: each run discards `burn_in` steps, then averages the
  /// step reward over `window` steps.
  std::size_t burn_in = 1'000;
  std::size_t window = 1'000;
  pctl::EvalOptions eval;
};

/// Smallest accepted long-run window.
inline constexpr std::size_t kMinSteadyWindow = 100;

/// Monte Carlo estimate of a top-level `P=? [...]` or `R=? [...]` query.
/// Run i uses the generator stream (seed, i), so results do not depend on
/// how runs are scheduled. Sub-formulas of the path are state formulas and
/// are evaluated exactly. A reachability reward whose target becomes
/// unreachable on a sampled path makes the estimate +infinity.
///
/// Throws InvalidArgument for thresholded queries, state formulas and a
/// long-run window below kMinSteadyWindow.
SimReport simulate_dtmc(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const pctl::Formula& query,
                        const SimOptions& opts = {});

struct Comparison {
  bool pass = false;
  double analytic = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::string report;
};

/// Passes iff |analytic - estimate| <= sigma * std_error, up to a relative
/// rounding slack of 1e-9 (two infinities of the same sign agree). Throws InvalidArgument unless sigma > 0.
Comparison compare(double analytic, const SimReport& sim, double sigma);

}  // namespace rfidqv::sim
