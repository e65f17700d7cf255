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

#include "rfidqv/rfid_config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rfidqv/errors.hpp"

namespace rfidqv::rfid {

namespace {

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_real(const std::string& v, std::size_t line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d)) {
    throw ParseError("expected a number, got '" + v + "'", line, 1);
  }
  return d;
}

int to_int(const std::string& v, std::size_t line) {
  const double d = to_real(v, line);
  if (d != std::floor(d) || std::fabs(d) > 1e9) throw ParseError("expected an integer, got '" + v + "'", line, 1);
  return static_cast<int>(d);
}

bool to_bool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("expected true or false, got '" + v + "'", line, 1);
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CostField {
  const char* name;
  double CostTable::*field;
};

constexpr CostField kCostFields[] = {
    {"tx_challenge", &CostTable::tx_challenge}, {"tx_response", &CostTable::tx_response},
    {"tx_forward", &CostTable::tx_forward},     {"tx_reply", &CostTable::tx_reply},
    {"tx_relay", &CostTable::tx_relay},         {"tx_error", &CostTable::tx_error},
    {"probe_weight", &CostTable::probe_weight}, {"probe_exponent", &CostTable::probe_exponent},
    {"tag_session", &CostTable::tag_session},   {"tag_failed", &CostTable::tag_failed},
};

}  // namespace

std::string to_string(FaultMode m) { return m == FaultMode::drop_m3 ? "drop_m3" : "auth_failure"; }

void RfidModelConfig::validate() const {
  // nB = 0 is accepted so that single-tag scenarios can be expressed.
  if (nA < 1 || nA > 50 || nB < 0 || nB > 50) throw InvalidArgument("tags per group must be within 1..50 (nB may be 0)");
  if (N() > 100) throw InvalidArgument("at most 100 tags in total");
  if (service_rate < 1) throw InvalidArgument("service_rate must be at least 1");
  if (!(arrival_prob > 0.0 && arrival_prob <= 1.0)) throw InvalidArgument("arrival_prob must be in (0,1]");
  if (arrival_batch < 1) throw InvalidArgument("arrival_batch must be at least 1");
  if (!(fault_prob >= 0.0 && fault_prob < 1.0)) throw InvalidArgument("fault_prob must be in [0,1)");
  if (l <= 0 || l % 4 != 0) throw InvalidArgument("l must be a positive multiple of 4");
  for (const auto& f : kCostFields) {
    if (!(costs.*f.field >= 0.0)) throw InvalidArgument(std::string("cost.") + f.name + " must be non-negative");
  }
}

RfidModelConfig with_population(RfidModelConfig cfg, int n) {
  cfg.nA = n - n / 2;
  cfg.nB = n / 2;
  return cfg;
}

RfidModelConfig parse_config(std::string_view text) {
  RfidModelConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, 1);
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key == "N") {
      cfg = with_population(cfg, to_int(value, line));
    } else if (key == "nA") {
      cfg.nA = to_int(value, line);
    } else if (key == "nB") {
      cfg.nB = to_int(value, line);
    } else if (key == "service_rate") {
      cfg.service_rate = to_int(value, line);
    } else if (key == "arrival_prob") {
      cfg.arrival_prob = to_real(value, line);
    } else if (key == "arrival_batch") {
      cfg.arrival_batch = to_int(value, line);
    } else if (key == "fault_prob") {
      cfg.fault_prob = to_real(value, line);
    } else if (key == "fault_mode") {
      if (value == "auth_failure") {
        cfg.fault_mode = FaultMode::auth_failure;
      } else if (value == "drop_m3") {
        cfg.fault_mode = FaultMode::drop_m3;
      } else {
        throw ParseError("fault_mode must be auth_failure or drop_m3", line, eq + 2);
      }
    } else if (key == "reauth") {
      cfg.reauth = to_bool(value, line);
    } else if (key == "l") {
      cfg.l = to_int(value, line);
    } else if (key.rfind("cost.", 0) == 0) {
      bool found = false;
      for (const auto& f : kCostFields) {
        if (key.substr(5) == f.name) {
          cfg.costs.*f.field = to_real(value, line);
          found = true;
        }
      }
      if (!found) throw ParseError("unknown cost field '" + key + "'", line, 1);
    } else {
      throw ParseError("unknown key '" + key + "'", line, 1);
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line, 1);
  }
  return cfg;
}

RfidModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_text(const RfidModelConfig& cfg) {
  std::ostringstream out;
  out << "nA = " << cfg.nA << "\nnB = " << cfg.nB << "\nservice_rate = " << cfg.service_rate
      << "\narrival_prob = " << real(cfg.arrival_prob) << "\narrival_batch = " << cfg.arrival_batch
      << "\nfault_prob = " << real(cfg.fault_prob) << "\nfault_mode = " << to_string(cfg.fault_mode)
      << "\nreauth = " << (cfg.reauth ? "true" : "false") << "\nl = " << cfg.l << '\n';
  for (const auto& f : kCostFields) out << "cost." << f.name << " = " << real(cfg.costs.*f.field) << '\n';
  return out.str();
}

}  // namespace rfidqv::rfid
