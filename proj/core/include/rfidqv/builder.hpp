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
#include <string>
#include <vector>

#include "rfidqv/dtmc.hpp"
#include "rfidqv/gc_model.hpp"

namespace rfidqv::gc {

struct BuildOptions {
  std::size_t max_states = 5'000'000;
  /// Add an `init` label for the initial state unless the model declares one.
  bool init_label = true;
};

struct BuiltModel {
  dtmc::Dtmc dtmc;
  dtmc::RewardModels rewards;
  /// Variable names in slot order (modules in order, then declaration order).
  std::vector<std::string> variables;
  /// Valuation of each state, row-major by state index.
  std::vector<int> valuations;

  std::size_t n_states() const { return dtmc.n_states(); }
  std::vector<int> valuation(std::size_t s) const;
  std::size_t slot(const std::string& variable) const;
};

/// Breadth-first exploration from the initial valuation. In each state one of
/// the k enabled commands is chosen with probability 1/k and its branches are
/// applied; edges reached several ways have their probabilities summed and
/// their transition rewards combined as the probability-weighted mean, so the
/// expected reward of every step is preserved. States without an enabled
/// command get a self-loop.
///
/// Throws ModelError for assignments leaving a variable's range, branch
/// probabilities outside [0,1] or not summing to 1 within 1e-9, and unknown
/// names; LimitError once more than max_states states are found.
BuiltModel build(const Model& m, const BuildOptions& opts = {});

}  // namespace rfidqv::gc
