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

// Reference implementations used only by the tests. They work on dense
// matrices with direct elimination and share no code with the engine.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rfidqv/dtmc.hpp"

namespace rfidqv::oracle {

using Dense = std::vector<std::vector<double>>;

Dense dense(const dtmc::Dtmc& d);
Dense dense(const SparseMatrix& m);

/// Gaussian elimination with partial pivoting; throws on a singular system.
std::vector<double> solve(Dense a, std::vector<double> b);

/// States that can reach `to` through `via` states (`to` states included).
dtmc::StateSet can_reach(const Dense& p, const dtmc::StateSet& via, const dtmc::StateSet& to);

std::vector<double> prob_until(const dtmc::Dtmc& d, const dtmc::StateSet& a, const dtmc::StateSet& b);
std::vector<double> prob_bounded_until(const dtmc::Dtmc& d, const dtmc::StateSet& a, const dtmc::StateSet& b,
                                       std::size_t t);
/// Bounded until by summing the probability of every path of length <= t.
double bounded_until_by_paths(const dtmc::Dtmc& d, const dtmc::StateSet& a, const dtmc::StateSet& b,
                              std::size_t t);
std::vector<double> reward_reachability(const dtmc::Dtmc& d, const dtmc::RewardStructure& r,
                                        const dtmc::StateSet& target);
double reward_instantaneous(const dtmc::Dtmc& d, const dtmc::RewardStructure& r, std::size_t t);
double reward_cumulative(const dtmc::Dtmc& d, const dtmc::RewardStructure& r, std::size_t t);
/// Row of the initial state in P^(2^squarings).
std::vector<double> limit_distribution(const dtmc::Dtmc& d, int squarings = 40);

/// A random chain with labels a and b and one reward structure.
struct RandomChain {
  dtmc::Dtmc dtmc;
  dtmc::RewardStructure rewards;
};
RandomChain random_chain(std::uint64_t seed, std::size_t n_states);

/// The fixed 20-chain corpus, sizes 2..20.
std::vector<RandomChain> corpus();

}  // namespace rfidqv::oracle
