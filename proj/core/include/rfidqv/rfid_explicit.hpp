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

#include <cstdint>
#include <vector>

#include "rfidqv/dtmc.hpp"
#include "rfidqv/rfid_config.hpp"

namespace rfidqv::rfid {

enum class TagPhase : std::uint8_t { idle, waiting, in_flight, authenticated };

/// Counters in the same order as the abstract model's variables:
/// idleA, waitA, authA, idleB, waitB, authB, flightA, flightB.
using Counters = std::vector<int>;

/// Per-tag chain with the same dynamics as the counter abstraction, tags
/// tracked individually (A tags first). Waiting tags to admit and idle tags
/// that request are drawn as uniform subsets. Small populations only.
struct ExplicitModel {
  dtmc::Dtmc dtmc;
  dtmc::RewardModels rewards;
  std::vector<std::vector<TagPhase>> states;
  int nA = 0;

  Counters counters(std::size_t state) const;
};

/// Throws InvalidArgument when nA + nB exceeds 6.
ExplicitModel build_explicit_rfid_model(const RfidModelConfig& cfg);

}  // namespace rfidqv::rfid
