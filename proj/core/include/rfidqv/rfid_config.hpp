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

#include <filesystem>
#include <string>
#include <string_view>

namespace rfidqv::rfid {

/// What a faulty session does: the server rejects (corrupted response, the
/// server answers with an error) or the final message M3 is lost.
enum class FaultMode { auth_failure, drop_m3 };

std::string to_string(FaultMode m);

/// Per-event weights. Transmission weights are per message, in protocol order;
/// server cost of one session is probe_weight * probes^probe_exponent.
struct CostTable {
  double tx_challenge = 1;  // r1
  double tx_response = 2;   // M1, M2
  double tx_forward = 3;    // r1, M1, M2 to the server
  double tx_reply = 2;      // M3, D
  double tx_relay = 1;      // M3 to the tag
  double tx_error = 1;      // server error message
  double probe_weight = 1;
  double probe_exponent = 1;
  double tag_session = 3;  // one keyed hash and two hashes
  double tag_failed = 1;   // only the keyed hash of step 2

  double tx_session() const { return tx_challenge + tx_response + tx_forward + tx_reply + tx_relay; }
};

struct RfidModelConfig {
  int nA = 5;
  int nB = 5;
  /// Sessions the server runs per time step.
  int service_rate = 25;
  /// Per group and step, probability that idle tags issue requests.
  double arrival_prob = 0.029;
  /// Tags that request together when a group fires.
  int arrival_batch = 1;
  double fault_prob = 0.0;
  FaultMode fault_mode = FaultMode::auth_failure;
  /// Authenticated tags keep re-authenticating on spare server capacity.
  bool reauth = true;
  /// Identifier length used by the protocol simulator.
  int l = 128;
  CostTable costs;

  int N() const { return nA + nB; }
  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

/// `key = value` lines, `#` comments. Keys: N (split evenly, A gets the odd
/// tag), nA, nB, service_rate, arrival_prob, arrival_batch, fault_prob,
/// fault_mode (auth_failure|drop_m3), reauth (true|false), l, and the cost
/// table as cost.<field>. Unknown keys are errors.
RfidModelConfig parse_config(std::string_view text);
RfidModelConfig load_config(const std::filesystem::path& path);
std::string to_text(const RfidModelConfig& cfg);

/// Returns cfg with N tags split as parse_config splits `N = n`.
RfidModelConfig with_population(RfidModelConfig cfg, int n);

}  // namespace rfidqv::rfid
