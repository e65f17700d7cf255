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

#include "rfidqv/dtmc.hpp"

#include <cmath>
#include <sstream>

#include "rfidqv/errors.hpp"

namespace rfidqv::dtmc {

StateSet all_states(std::size_t n) { return StateSet(n, true); }
StateSet no_states(std::size_t n) { return StateSet(n, false); }

StateSet make_set(std::size_t n, const std::vector<std::size_t>& states) {
  StateSet out(n, false);
  for (auto s : states) {
    if (s >= n) throw InvalidArgument("state " + std::to_string(s) + " out of range");
    out[s] = true;
  }
  return out;
}

std::vector<std::size_t> members(const StateSet& set) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < set.size(); ++s) {
    if (set[s]) out.push_back(s);
  }
  return out;
}

Dtmc::Dtmc(std::size_t n_states, std::size_t initial, SparseMatrix transitions,
           std::map<std::string, StateSet> labels)
    : n_states_(n_states), initial_(initial), transitions_(std::move(transitions)), labels_(std::move(labels)) {}

const StateSet& Dtmc::label(const std::string& name) const {
  const auto it = labels_.find(name);
  if (it == labels_.end()) throw InvalidArgument("unknown atomic proposition '" + name + "'");
  return it->second;
}

RewardStructure RewardStructure::zero(const Dtmc& d) {
  return RewardStructure{std::vector<double>(d.n_states(), 0.0), SparseMatrix(d.n_states(), d.n_states())};
}

std::vector<double> expected_step_reward(const Dtmc& d, const RewardStructure& r) {
  std::vector<double> out(d.n_states(), 0.0);
  const auto& p = d.transitions();
  const bool has_transition_rewards = r.transition_rewards.nnz() > 0;
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    double v = r.state_rewards.empty() ? 0.0 : r.state_rewards[s];
    if (has_transition_rewards) {
      for (const auto& e : r.transition_rewards.row(s)) v += p.at(s, e.column) * e.value;
    }
    out[s] = v;
  }
  return out;
}

std::vector<std::string> validate(const Dtmc& d) {
  std::vector<std::string> out;
  const auto& p = d.transitions();
  if (d.n_states() == 0) out.push_back("chain has no states");
  if (d.initial() >= d.n_states()) {
    out.push_back("initial state " + std::to_string(d.initial()) + " out of range");
  }
  if (p.rows() != d.n_states() || p.cols() != d.n_states()) {
    out.push_back("transition matrix is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) +
                  ", expected " + std::to_string(d.n_states()) + "x" + std::to_string(d.n_states()));
    return out;
  }
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    double sum = 0.0;
    for (const auto& e : p.row(s)) {
      if (!(e.value >= 0.0 && e.value <= 1.0)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "state " << s << ": probability " << e.value << " to state " << e.column << " outside [0,1]";
        out.push_back(msg.str());
      }
      sum += e.value;
    }
    if (p.row(s).empty()) {
      out.push_back("state " + std::to_string(s) + " has no outgoing transition (terminal states need a self-loop)");
    } else if (std::abs(sum - 1.0) > kStochasticTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "state " << s << ": outgoing probabilities sum to " << sum;
      out.push_back(msg.str());
    }
  }
  for (const auto& [name, set] : d.labels()) {
    if (set.size() != d.n_states()) out.push_back("label '" + name + "' has wrong size");
  }
  return out;
}

std::vector<std::string> validate(const Dtmc& d, const RewardStructure& r) {
  std::vector<std::string> out = validate(d);
  if (r.state_rewards.size() != d.n_states()) {
    out.push_back("state reward vector has " + std::to_string(r.state_rewards.size()) + " entries, expected " +
                  std::to_string(d.n_states()));
  } else {
    for (std::size_t s = 0; s < d.n_states(); ++s) {
      if (!(r.state_rewards[s] >= 0.0) || std::isinf(r.state_rewards[s])) {
        out.push_back("state " + std::to_string(s) + ": state reward must be finite and non-negative");
      }
    }
  }
  const auto& iota = r.transition_rewards;
  if (iota.rows() != d.n_states() || iota.cols() != d.n_states()) {
    out.push_back("transition reward matrix has wrong shape");
    return out;
  }
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    for (const auto& e : iota.row(s)) {
      if (!(e.value >= 0.0) || std::isinf(e.value)) {
        out.push_back("transition reward " + std::to_string(s) + "->" + std::to_string(e.column) +
                      " must be finite and non-negative");
      }
      if (e.value != 0.0 && d.transitions().at(s, e.column) == 0.0) {
        out.push_back("transition reward on zero-probability edge " + std::to_string(s) + "->" +
                      std::to_string(e.column));
      }
    }
  }
  return out;
}

}  // namespace rfidqv::dtmc
