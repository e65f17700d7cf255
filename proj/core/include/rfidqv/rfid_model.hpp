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

#include <string>
#include <vector>

#include "rfidqv/builder.hpp"
#include "rfidqv/gc_model.hpp"
#include "rfidqv/rfid_config.hpp"

namespace rfidqv::rfid {

// Counter abstraction of a population of nA + nB tags served by one server.
//
// MD_TA / MD_TB count each group's tags that are idle, waiting for service
// and authenticated; MD_Medium counts the sessions in flight (tags admitted
// in the previous step, one per group); MD_S is the server and drives time
// with a single synchronous `tick` command. One tick:
//
//   1. every in-flight session runs its six steps; it fails independently
//      with fault_prob and the tag returns to waiting, otherwise the tag is
//      authenticated;
//   2. spare capacity service_rate - flight is used for re-authentication
//      sessions of authenticated tags (state unchanged, costs accrue);
//   3. up to service_rate waiting tags are admitted, group A first but never
//      more than max(service_rate - waitB, ceil(service_rate / 2));
//   4. each group independently, with arrival_prob, moves
//      min(arrival_batch, idle) tags from idle to waiting.
//
// A tag is "under authentication" once its session has started: flight +
// authenticated.

/// Reward structure names.
inline constexpr const char* kTransmission = "MD_RT";
inline constexpr const char* kComputation = "MD_RC";
inline constexpr const char* kServerComputation = "MD_RC_S";
inline constexpr const char* kTagComputation = "MD_RC_T";
inline constexpr const char* kReauthComputation = "MD_RC_reauth";
inline constexpr const char* kCount = "count";
inline constexpr const char* kAuthenticated = "authenticated";
inline constexpr const char* kInService = "in_service";
inline constexpr const char* kPending = "pending";
inline constexpr const char* kBusy = "busy";

/// The guarded-command system for cfg.
gc::Model rfid_guarded_commands(const RfidModelConfig& cfg);

/// rfid_guarded_commands followed by gc::build.
gc::BuiltModel build_rfid_model(const RfidModelConfig& cfg, const gc::BuildOptions& opts = {});

/// Expected per-session costs used by the reward structures.
struct SessionCosts {
  double tx;
  double server;
  double tag;
};
SessionCosts expected_session_costs(const RfidModelConfig& cfg);

}  // namespace rfidqv::rfid
