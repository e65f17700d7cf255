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

#include "rfidqv/gc_model.hpp"

#include <set>

#include "rfidqv/errors.hpp"

namespace rfidqv::gc {

void check_well_formed(const Model& m) {
  std::set<std::string> names;
  const auto claim = [&](const std::string& name, const char* what) {
    if (!names.insert(name).second) throw ModelError(std::string("duplicate ") + what + " name '" + name + "'");
  };
  for (const auto& c : m.constants) claim(c.name, "constant");
  for (const auto& f : m.formulas) claim(f.name, "formula");
  std::set<std::string> modules;
  for (const auto& mod : m.modules) {
    if (!modules.insert(mod.name).second) throw ModelError("duplicate module name '" + mod.name + "'");
    for (const auto& v : mod.variables) {
      claim(v.name, "variable");
      if (v.lo > v.hi) throw ModelError("variable '" + v.name + "' has an empty range");
      if (v.init < v.lo || v.init > v.hi) {
        throw ModelError("initial value of '" + v.name + "' is outside [" + std::to_string(v.lo) + ".." +
                         std::to_string(v.hi) + "]");
      }
    }
    for (const auto& c : mod.commands) {
      if (c.updates.empty()) throw ModelError("command in module '" + mod.name + "' has no updates");
    }
  }
  std::set<std::string> labels;
  for (const auto& l : m.labels) {
    if (!labels.insert(l.name).second) throw ModelError("duplicate label \"" + l.name + "\"");
  }
  std::set<std::string> rewards;
  for (const auto& r : m.rewards) {
    if (!rewards.insert(r.name).second) throw ModelError("duplicate reward structure \"" + r.name + "\"");
  }
}

}  // namespace rfidqv::gc
