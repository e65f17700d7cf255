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
#include <limits>
#include <vector>

#include "rfidqv/analysis.hpp"
#include "rfidqv/builder.hpp"
#include "rfidqv/csv.hpp"
#include "rfidqv/rfid_config.hpp"

namespace rfidqv::experiments {

inline constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

/// Expected tags under authentication at t = 0..horizon.
std::vector<double> count_series(const gc::BuiltModel& m, std::size_t horizon);

/// Expected transmission cost of the first t steps, t = 0..horizon.
std::vector<double> transmission_series(const gc::BuiltModel& m, std::size_t horizon);

/// First t with series[t] >= (1 - tolerance) * n, or kNever.
std::size_t saturation_time(const std::vector<double>& series, double n, double tolerance = 0.01);

/// Relative spread (max - min) / max of the per-step increments of a
/// cumulative series over steps [from, end).
double increment_spread(const std::vector<double>& cumulative, std::size_t from);

/// Expected computation until every tag is authenticated.
struct CostPoint {
  int n = 0;
  double server = 0.0;
  double tag = 0.0;
  double reauth = 0.0;
};
CostPoint computation_to_allauth(const gc::BuiltModel& m, int n, const dtmc::SolverOptions& opts = {});

/// Long-run sessions per step, mean delay from request to authentication and
/// server computation per authenticated tag.
struct ServicePoint {
  int n = 0;
  double service_rate = 0.0;
  double mean_delay = 0.0;
  double server_time = 0.0;
};
ServicePoint service_metrics(const gc::BuiltModel& m, int n, const dtmc::SolverOptions& opts = {});

struct SweepSpec {
  rfid::RfidModelConfig base;
  int start = 10;
  int stop = 100;
  int step = 10;
  std::size_t horizon = 2500;

  std::vector<int> populations() const;
  /// Throws InvalidArgument for bounds outside 2..100, step < 1 or horizon 0.
  void validate() const;
};

struct SweepResult {
  csv::Table fig2{{"t"}};  // count under authentication over time, one column per N
  csv::Table fig3{{"t"}};  // cumulative transmission cost over time, one column per N
  csv::Table fig4{{"N"}};  // computation to authenticate all tags
  csv::Table fig5{{"N"}};  // service rate and delay
};

/// Builds one model per N. A LimitError is rethrown naming the failing N.
SweepResult run_sweep(const SweepSpec& spec, const gc::BuildOptions& build = {});

}  // namespace rfidqv::experiments
