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
#include <limits>
#include <vector>

#include "rfidqv/dtmc.hpp"

namespace rfidqv::dtmc {

/// Gauss-Seidel controls. Iteration stops once the max-norm of successive
/// differences is at most `epsilon`; reaching `max_iterations` first throws
/// NumericalError.
struct SolverOptions {
  double epsilon = 1e-8;
  std::size_t max_iterations = 1'000'000;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// delta_initial * P^t.
std::vector<double> transient_distribution(const Dtmc& d, std::size_t t);
/// One forward product pi * P.
std::vector<double> step(const Dtmc& d, const std::vector<double>& pi);

std::vector<double> prob_next(const Dtmc& d, const StateSet& target);
std::vector<double> prob_bounded_until(const Dtmc& d, const StateSet& a, const StateSet& b, std::size_t t);

/// States from which a U b holds with probability exactly 0 / exactly 1,
/// by graph reachability alone.
StateSet prob0(const Dtmc& d, const StateSet& a, const StateSet& b);
StateSet prob1(const Dtmc& d, const StateSet& a, const StateSet& b);

std::vector<double> prob_until(const Dtmc& d, const StateSet& a, const StateSet& b, const SolverOptions& opts = {});

double reward_instantaneous(const Dtmc& d, const RewardStructure& r, std::size_t t);
/// Expected reward over the first t steps: the state reward of each of the
/// first t states plus the transition reward of each of the t transitions.
double reward_cumulative(const Dtmc& d, const RewardStructure& r, std::size_t t);

/// Values of I=t for t = 0..horizon in one forward pass.
std::vector<double> instantaneous_series(const Dtmc& d, const RewardStructure& r, std::size_t horizon);
/// Values of C<=t for t = 0..horizon in one forward pass.
std::vector<double> cumulative_series(const Dtmc& d, const RewardStructure& r, std::size_t horizon);

/// Expected reward accumulated before first reaching target, per state;
/// +infinity where target is not reached almost surely.
std::vector<double> reward_reachability_states(const Dtmc& d, const RewardStructure& r, const StateSet& target,
                                               const SolverOptions& opts = {});
double reward_reachability(const Dtmc& d, const RewardStructure& r, const StateSet& target,
                           const SolverOptions& opts = {});

/// Strongly connected components of the subgraph reachable from the initial
/// state that have no edge leaving them.
std::vector<std::vector<std::size_t>> bottom_components(const Dtmc& d);

/// Stationary distribution over all states (zero on transient states).
/// Throws UnsupportedStructure unless the reachable part has exactly one
/// bottom component and that component is aperiodic.
std::vector<double> steady_state_distribution(const Dtmc& d, const SolverOptions& opts = {});
double reward_steady_state(const Dtmc& d, const RewardStructure& r, const SolverOptions& opts = {});

}  // namespace rfidqv::dtmc
