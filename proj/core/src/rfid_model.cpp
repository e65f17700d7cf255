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

#include "rfidqv/rfid_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rfidqv/gc_text.hpp"

namespace rfidqv::rfid {

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Probability factor of one group's arrival outcome.
std::string arrival_factor(bool fires) { return fires ? "p" : "(1 - p)"; }

}  // namespace

SessionCosts expected_session_costs(const RfidModelConfig& cfg) {
  const auto& c = cfg.costs;
  const double f = cfg.fault_prob;
  const double d = cfg.N();
  const double srv_ok = c.probe_weight * std::pow(d, c.probe_exponent);
  double tx_fail = c.tx_session();
  double srv_fail = srv_ok;
  if (cfg.fault_mode == FaultMode::auth_failure) {
    // The server scans every pair without a match and answers with an error.
    tx_fail = c.tx_challenge + c.tx_response + c.tx_forward + c.tx_error;
    srv_fail = c.probe_weight * std::pow(2 * d, c.probe_exponent);
  }
  return {(1 - f) * c.tx_session() + f * tx_fail, (1 - f) * srv_ok + f * srv_fail,
          (1 - f) * c.tag_session + f * c.tag_failed};
}

gc::Model rfid_guarded_commands(const RfidModelConfig& cfg) {
  cfg.validate();
  const int cap = cfg.service_rate;
  const SessionCosts costs = expected_session_costs(cfg);
  std::ostringstream m;
  m << "dtmc\n\n"
    << "const int nA = " << cfg.nA << ";\n"
    << "const int nB = " << cfg.nB << ";\n"
    << "const int N = nA + nB;\n"
    << "const int cap = " << cap << ";\n"
    << "const int half = " << (cap + 1) / 2 << ";\n"
    << "const int batch = " << cfg.arrival_batch << ";\n"
    << "const double p = " << real(cfg.arrival_prob) << ";\n"
    << "const double f = " << real(cfg.fault_prob) << ";\n"
    << "const double tx = " << real(costs.tx) << ";\n"
    << "const double srv = " << real(costs.server) << ";\n"
    << "const double tagc = " << real(costs.tag) << ";\n\n"
    << "formula flight = flightA + flightB;\n"
    << "formula authed = authA + authB;\n"
    << "formula reauth = " << (cfg.reauth ? "min(cap - flight, authed)" : "0") << ";\n"
    << "formula load = flight + reauth;\n"
    << "formula count = flight + authed;\n"
    << "formula admitA = min(waitA, max(cap - waitB, half));\n"
    << "formula admitB = min(waitB, cap - admitA);\n"
    << "formula burstA = min(batch, idleA);\n"
    << "formula burstB = min(batch, idleB);\n";

  m << "\nmodule MD_TA\n"
    << "  var idleA : [0..nA] init nA;\n"
    << "  var waitA : [0..nA] init 0;\n"
    << "  var authA : [0..nA] init 0;\n"
    << "endmodule\n"
    << "\nmodule MD_TB\n"
    << "  var idleB : [0..nB] init nB;\n"
    << "  var waitB : [0..nB] init 0;\n"
    << "  var authB : [0..nB] init 0;\n"
    << "endmodule\n"
    << "\nmodule MD_Medium\n"
    << "  var flightA : [0..nA] init 0;\n"
    << "  var flightB : [0..nB] init 0;\n"
    << "endmodule\n";

  // Failure counts per group range over 0..max in-flight; branches whose
  // binomial weight is zero in a state are skipped by the builder.
  const bool faults = cfg.fault_prob > 0.0;
  const int max_fa = faults ? std::min(cap, cfg.nA) : 0;
  const int max_fb = faults ? std::min(cap, cfg.nB) : 0;
  m << "\nmodule MD_S\n  [tick] true ->";
  bool first = true;
  for (int fa = 0; fa <= max_fa; ++fa) {
    for (int fb = 0; fb <= max_fb; ++fb) {
      for (int arr = 0; arr < 4; ++arr) {
        const bool arr_a = arr & 1, arr_b = arr & 2;
        std::string prob = arrival_factor(arr_a) + " * " + arrival_factor(arr_b);
        if (faults) {
          prob = "binom(flightA, " + std::to_string(fa) + ", f) * binom(flightB, " + std::to_string(fb) + ", f) * " + prob;
        }
        const std::string in_a = arr_a ? "burstA" : "0";
        const std::string in_b = arr_b ? "burstB" : "0";
        m << (first ? "\n      " : "\n    + ") << prob << " : "
          << "(idleA'=idleA - " << in_a << ") & (waitA'=waitA - admitA + " << fa << " + " << in_a << ")"
          << " & (authA'=authA + flightA - " << fa << ") & (flightA'=admitA)"
          << " & (idleB'=idleB - " << in_b << ") & (waitB'=waitB - admitB + " << fb << " + " << in_b << ")"
          << " & (authB'=authB + flightB - " << fb << ") & (flightB'=admitB)";
        first = false;
      }
    }
  }
  m << ";\nendmodule\n\n";

  m << "label \"allauth\" = authed = N;\n"
    << "label \"saturated\" = load = cap;\n";
  for (int k = 0; k <= cfg.N(); ++k) {
    m << "label \"count_" << k << "\" = count = " << k << ";\n";
    m << "label \"auth_" << k << "\" = authed = " << k << ";\n";
  }

  m << "\nrewards \"" << kTransmission << "\"\n  [tick] true : load * tx;\nendrewards\n"
    << "\nrewards \"" << kComputation << "\"\n  [tick] true : flight * (srv + tagc);\nendrewards\n"
    << "\nrewards \"" << kServerComputation << "\"\n  [tick] true : flight * srv;\nendrewards\n"
    << "\nrewards \"" << kTagComputation << "\"\n  [tick] true : flight * tagc;\nendrewards\n"
    << "\nrewards \"" << kReauthComputation << "\"\n  [tick] true : reauth * (srv + tagc);\nendrewards\n"
    << "\nrewards \"" << kCount << "\"\n  true : count;\nendrewards\n"
    << "\nrewards \"" << kAuthenticated << "\"\n  true : authed;\nendrewards\n"
    << "\nrewards \"" << kInService << "\"\n  true : flight;\nendrewards\n"
    << "\nrewards \"" << kPending << "\"\n  true : waitA + waitB + flight;\nendrewards\n"
    << "\nrewards \"" << kBusy << "\"\n  true : load;\nendrewards\n";
  return gc::parse_model(m.str());
}

gc::BuiltModel build_rfid_model(const RfidModelConfig& cfg, const gc::BuildOptions& opts) {
  return gc::build(rfid_guarded_commands(cfg), opts);
}

}  // namespace rfidqv::rfid
