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
#include <map>
#include <string>
#include <vector>

#include "rfidqv/sparse.hpp"

namespace rfidqv::dtmc {

/// Membership bitmap over state indices.
using StateSet = std::vector<bool>;

StateSet all_states(std::size_t n);
StateSet no_states(std::size_t n);
StateSet make_set(std::size_t n, const std::vector<std::size_t>& members);
std::vector<std::size_t> members(const StateSet& set);

/// Labelled discrete-time Markov chain (S, initial, P, L). Immutable once built.
class Dtmc {
 public:
  Dtmc() = default;
  Dtmc(std::size_t n_states, std::size_t initial, SparseMatrix transitions,
       std::map<std::string, StateSet> labels = {});

  std::size_t n_states() const { return n_states_; }
  std::size_t initial() const { return initial_; }
  const SparseMatrix& transitions() const { return transitions_; }
  const std::map<std::string, StateSet>& labels() const { return labels_; }
  bool has_label(const std::string& name) const { return labels_.count(name) != 0; }
  /// Throws InvalidArgument for an unknown proposition.
  const StateSet& label(const std::string& name) const;

  friend bool operator==(const Dtmc&, const Dtmc&) = default;

 private:
  std::size_t n_states_ = 0;
  std::size_t initial_ = 0;
  SparseMatrix transitions_;
  std::map<std::string, StateSet> labels_;
};

/// State rewards rho and transition rewards iota.
struct RewardStructure {
  std::vector<double> state_rewards;
  SparseMatrix transition_rewards;

  /// All-zero structure shaped for d.
  static RewardStructure zero(const Dtmc& d);

  friend bool operator==(const RewardStructure&, const RewardStructure&) = default;
};

using RewardModels = std::map<std::string, RewardStructure>;

/// rho(s) + sum_s' P(s,s') iota(s,s'): expected reward earned by one step
/// taken from s.
std::vector<double> expected_step_reward(const Dtmc& d, const RewardStructure& r);

/// Every violated invariant, one message each; empty when valid.
std::vector<std::string> validate(const Dtmc& d);
std::vector<std::string> validate(const Dtmc& d, const RewardStructure& r);

constexpr double kStochasticTolerance = 1e-9;

}  // namespace rfidqv::dtmc
