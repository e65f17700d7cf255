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

#include "rfidqv/experiments.hpp"

#include <algorithm>

#include "rfidqv/errors.hpp"
#include "rfidqv/rfid_model.hpp"

namespace rfidqv::experiments {

namespace {

const dtmc::RewardStructure& reward(const gc::BuiltModel& m, const char* name) {
  const auto it = m.rewards.find(name);
  if (it == m.rewards.end()) throw InvalidArgument(std::string("model has no reward structure ") + name);
  return it->second;
}

}  // namespace

std::vector<double> count_series(const gc::BuiltModel& m, std::size_t horizon) {
  return dtmc::instantaneous_series(m.dtmc, reward(m, rfid::kCount), horizon);
}

std::vector<double> transmission_series(const gc::BuiltModel& m, std::size_t horizon) {
  return dtmc::cumulative_series(m.dtmc, reward(m, rfid::kTransmission), horizon);
}

std::size_t saturation_time(const std::vector<double>& series, double n, double tolerance) {
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (series[t] >= (1.0 - tolerance) * n) return t;
  }
  return kNever;
}

double increment_spread(const std::vector<double>& cumulative, std::size_t from) {
  if (from + 1 >= cumulative.size()) throw InvalidArgument("no increments after the given step");
  double lo = cumulative[from + 1] - cumulative[from];
  double hi = lo;
  for (std::size_t t = from + 1; t + 1 < cumulative.size(); ++t) {
    const double inc = cumulative[t + 1] - cumulative[t];
    lo = std::min(lo, inc);
    hi = std::max(hi, inc);
  }
  return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

CostPoint computation_to_allauth(const gc::BuiltModel& m, int n, const dtmc::SolverOptions& opts) {
  const auto& target = m.dtmc.label("allauth");
  return {n, dtmc::reward_reachability(m.dtmc, reward(m, rfid::kServerComputation), target, opts),
          dtmc::reward_reachability(m.dtmc, reward(m, rfid::kTagComputation), target, opts),
          dtmc::reward_reachability(m.dtmc, reward(m, rfid::kReauthComputation), target, opts)};
}

ServicePoint service_metrics(const gc::BuiltModel& m, int n, const dtmc::SolverOptions& opts) {
  const auto& target = m.dtmc.label("allauth");
  // Each tag's delay is the number of steps it spends waiting or in flight,
  // so the pending-tag total until all are served, divided by n, is the mean.
  const double pending = dtmc::reward_reachability(m.dtmc, reward(m, rfid::kPending), target, opts);
  const double server = dtmc::reward_reachability(m.dtmc, reward(m, rfid::kServerComputation), target, opts);
  return {n, dtmc::reward_steady_state(m.dtmc, reward(m, rfid::kBusy), opts), pending / n, server / n};
}

std::vector<int> SweepSpec::populations() const {
  std::vector<int> out;
  for (int n = start; n <= stop; n += step) out.push_back(n);
  return out;
}

void SweepSpec::validate() const {
  if (start < 2 || stop > 100 || start > stop) throw InvalidArgument("sweep bounds must satisfy 2 <= start <= stop <= 100");
  if (step < 1) throw InvalidArgument("sweep step must be at least 1");
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
}

SweepResult run_sweep(const SweepSpec& spec, const gc::BuildOptions& build) {
  spec.validate();
  const auto ns = spec.populations();
  std::vector<std::string> series_header{"t"};
  for (int n : ns) series_header.push_back("N=" + std::to_string(n));
  SweepResult out{csv::Table(series_header), csv::Table(series_header),
                  csv::Table({"N", "server", "tag", "total", "reauth"}),
                  csv::Table({"N", "service_rate", "mean_delay", "server_time"})};
  std::vector<std::vector<double>> fig2, fig3;
  for (int n : ns) {
    gc::BuiltModel m;
    try {
      m = rfid::build_rfid_model(rfid::with_population(spec.base, n), build);
    } catch (const LimitError& e) {
      throw LimitError("N=" + std::to_string(n) + ": " + e.what());
    }
    fig2.push_back(count_series(m, spec.horizon));
    fig3.push_back(transmission_series(m, spec.horizon));
    const CostPoint c = computation_to_allauth(m, n);
    out.fig4.add_numbers({static_cast<double>(n), c.server, c.tag, c.server + c.tag, c.reauth});
    const ServicePoint s = service_metrics(m, n);
    out.fig5.add_numbers({static_cast<double>(n), s.service_rate, s.mean_delay, s.server_time});
  }
  for (std::size_t t = 0; t <= spec.horizon; ++t) {
    std::vector<double> row2{static_cast<double>(t)}, row3{static_cast<double>(t)};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      row2.push_back(fig2[i][t]);
      row3.push_back(fig3[i][t]);
    }
    out.fig2.add_numbers(row2);
    out.fig3.add_numbers(row3);
  }
  return out;
}

}  // namespace rfidqv::experiments
