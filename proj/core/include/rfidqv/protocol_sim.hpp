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
#include <vector>

#include "rfidqv/hash.hpp"
#include "rfidqv/rfid_config.hpp"

namespace rfidqv::sim {

/// Mean and standard error over runs, one entry per time point.
struct SeriesStat {
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct TagDelay {
  std::size_t run = 0;
  int tag = 0;
  std::size_t request = 0;     // first step spent waiting
  std::size_t completion = 0;  // first step authenticated
  std::size_t delay() const { return completion - request; }
};

struct ProtocolSeries {
  std::size_t horizon = 0;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  // State at t = 0..horizon.
  SeriesStat authenticated;
  SeriesStat in_service;
  // Costs of the first t steps, t = 0..horizon.
  SeriesStat cum_tx;
  SeriesStat cum_srv;
  SeriesStat cum_tag;
  SeriesStat cum_reauth;  // computation spent in re-authentication sessions
  // Sessions run during step t -> t+1, t = 0..horizon-1.
  SeriesStat sessions;
  std::vector<TagDelay> delays;
  double mean_delay = 0.0;
  double mean_delay_std_error = 0.0;
  /// Tags (summed over runs) still unauthenticated at the horizon.
  std::size_t incomplete = 0;

  /// Mean sessions per step over steps [from, to).
  double throughput(std::size_t from, std::size_t to) const;
};

/// Discrete-event run of the deployment with real protocol sessions: each
/// tag holds its own identifier, the server holds one record per tag (A tags
/// first) and costs come from the messages actually sent and the probes
/// actually made. Step semantics match the counter model; waiting tags are
/// served first-come first-served and re-authentication cycles through the
/// authenticated tags in order. Run i uses generator stream (seed, i).
ProtocolSeries simulate_protocol(const rfid::RfidModelConfig& cfg, const protocol::ProtocolConfig& pcfg,
                                 std::size_t horizon, std::size_t runs, std::uint64_t seed);

/// `t,authenticated,in_service,cum_tx,cum_srv,cum_tag` with the run means.
std::string series_csv(const ProtocolSeries& s);
/// `run,tag,request,completion,delay`.
std::string delays_csv(const ProtocolSeries& s);

}  // namespace rfidqv::sim
