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

#include "rfidqv/expr.hpp"

namespace rfidqv::gc {

struct Variable {
  std::string name;
  int lo = 0;
  int hi = 0;
  int init = 0;
};

struct Assignment {
  std::string variable;
  ExprPtr value;
};

/// One probabilistic branch `p : (x'=e) & (y'=f)`. The probability is an
/// expression so it may depend on the current state; branches evaluating to
/// zero are skipped.
struct Update {
  ExprPtr probability;
  std::vector<Assignment> assignments;
};

struct Command {
  std::string action;  // empty for `[ ]`
  ExprPtr guard;
  std::vector<Update> updates;
};

struct Module {
  std::string name;
  std::vector<Variable> variables;
  std::vector<Command> commands;
};

struct Constant {
  std::string name;
  bool integer = false;
  ExprPtr value;
};

struct FormulaDef {
  std::string name;
  ExprPtr value;
};

struct LabelDef {
  std::string name;
  ExprPtr predicate;
};

struct StateRewardItem {
  ExprPtr guard;
  ExprPtr value;
};

/// `[action] guard : value;` is earned by every transition taken through a
/// command with that action label whose guard holds in the source state.
struct TransitionRewardItem {
  std::string action;
  ExprPtr guard;
  ExprPtr value;
};

struct RewardDef {
  std::string name;
  std::vector<StateRewardItem> state_items;
  std::vector<TransitionRewardItem> transition_items;
};

struct Model {
  std::vector<Constant> constants;
  std::vector<FormulaDef> formulas;
  std::vector<Module> modules;
  std::vector<LabelDef> labels;
  std::vector<RewardDef> rewards;
};

/// Structural checks that do not need exploration: unique names, ranges
/// containing the initial value, non-empty update lists.
void check_well_formed(const Model& m);

}  // namespace rfidqv::gc
