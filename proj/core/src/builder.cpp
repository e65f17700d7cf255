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

#include "rfidqv/builder.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <unordered_map>

#include "rfidqv/errors.hpp"

namespace rfidqv::gc {

namespace {

struct ResolvedAssignment {
  std::size_t slot;
  ExprPtr value;
};

struct ResolvedUpdate {
  ExprPtr probability;
  std::vector<ResolvedAssignment> assignments;
};

struct ResolvedCommand {
  std::string where;  // "module M, command k" for diagnostics
  ExprPtr guard;
  std::vector<ResolvedUpdate> updates;
  // Per reward structure: (guard, value) of the matching transition items.
  std::vector<std::vector<std::pair<ExprPtr, ExprPtr>>> rewards;
};

struct ResolvedReward {
  std::string name;
  std::vector<std::pair<ExprPtr, ExprPtr>> state_items;
};

std::string key_of(std::span<const int> v) {
  std::string k(v.size() * sizeof(int), '\0');
  std::memcpy(k.data(), v.data(), k.size());
  return k;
}

std::string describe_state(const std::vector<std::string>& names, std::span<const int> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += names[i] + "=" + std::to_string(v[i]);
  }
  return out + ")";
}

}  // namespace

std::vector<int> BuiltModel::valuation(std::size_t s) const {
  const std::size_t w = variables.size();
  return {valuations.begin() + static_cast<std::ptrdiff_t>(s * w),
          valuations.begin() + static_cast<std::ptrdiff_t>((s + 1) * w)};
}

std::size_t BuiltModel::slot(const std::string& variable) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == variable) return i;
  }
  throw InvalidArgument("unknown variable '" + variable + "'");
}

BuiltModel build(const Model& m, const BuildOptions& opts) {
  check_well_formed(m);

  Scope scope;
  std::vector<std::string> names;
  std::vector<Variable> vars;
  for (const auto& mod : m.modules) {
    for (const auto& v : mod.variables) {
      scope.variables[v.name] = names.size();
      names.push_back(v.name);
      vars.push_back(v);
    }
  }
  for (const auto& c : m.constants) {
    double v = eval_constant(c.value, scope);
    if (c.integer && v != std::floor(v)) throw ModelError("int constant '" + c.name + "' is not integral");
    scope.constants[c.name] = v;
  }
  for (const auto& f : m.formulas) scope.formulas[f.name] = resolve(f.value, scope);

  std::vector<ResolvedCommand> commands;
  for (const auto& mod : m.modules) {
    for (std::size_t ci = 0; ci < mod.commands.size(); ++ci) {
      const auto& c = mod.commands[ci];
      ResolvedCommand rc;
      rc.where = "module " + mod.name + ", command " + std::to_string(ci + 1);
      if (!c.action.empty()) rc.where += " [" + c.action + "]";
      rc.guard = resolve(c.guard, scope);
      for (const auto& u : c.updates) {
        ResolvedUpdate ru{resolve(u.probability, scope), {}};
        for (const auto& a : u.assignments) {
          const auto it = scope.variables.find(a.variable);
          if (it == scope.variables.end()) {
            throw ModelError(rc.where + ": assignment to unknown variable '" + a.variable + "'");
          }
          ru.assignments.push_back({it->second, resolve(a.value, scope)});
        }
        rc.updates.push_back(std::move(ru));
      }
      rc.rewards.resize(m.rewards.size());
      for (std::size_t ri = 0; ri < m.rewards.size(); ++ri) {
        for (const auto& item : m.rewards[ri].transition_items) {
          if (item.action == c.action) {
            rc.rewards[ri].emplace_back(resolve(item.guard, scope), resolve(item.value, scope));
          }
        }
      }
      commands.push_back(std::move(rc));
    }
  }
  std::vector<ResolvedReward> rewards;
  for (const auto& r : m.rewards) {
    ResolvedReward rr{r.name, {}};
    for (const auto& item : r.state_items) rr.state_items.emplace_back(resolve(item.guard, scope), resolve(item.value, scope));
    rewards.push_back(std::move(rr));
  }
  std::vector<std::pair<std::string, ExprPtr>> labels;
  for (const auto& l : m.labels) labels.emplace_back(l.name, resolve(l.predicate, scope));

  const std::size_t width = names.size();
  std::vector<int> valuations;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<std::size_t> frontier;

  const auto intern = [&](std::span<const int> v) -> std::size_t {
    auto [it, inserted] = index.try_emplace(key_of(v), index.size());
    if (inserted) {
      if (index.size() > opts.max_states) {
        throw LimitError("state space exceeds the limit of " + std::to_string(opts.max_states) + " states");
      }
      valuations.insert(valuations.end(), v.begin(), v.end());
      frontier.push_back(it->second);
    }
    return it->second;
  };

  std::vector<int> init(width);
  for (std::size_t i = 0; i < width; ++i) init[i] = vars[i].init;
  intern(init);

  std::vector<Triplet> prob;
  std::vector<std::vector<Triplet>> trew(rewards.size());
  std::vector<int> src(width), dst(width);
  // Successors of the current state: target, probability, reward numerators.
  std::vector<std::pair<std::size_t, double>> succ;
  std::vector<std::vector<double>> succ_rew;

  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop_front();
    std::copy_n(valuations.begin() + static_cast<std::ptrdiff_t>(s * width), width, src.begin());

    std::vector<const ResolvedCommand*> enabled;
    for (const auto& c : commands) {
      if (eval(*c.guard, src) != 0.0) enabled.push_back(&c);
    }
    succ.clear();
    succ_rew.clear();
    if (enabled.empty()) {
      prob.push_back({s, s, 1.0});
      continue;
    }
    const double pick = 1.0 / static_cast<double>(enabled.size());
    for (const ResolvedCommand* c : enabled) {
      std::vector<double> cmd_rew(rewards.size(), 0.0);
      for (std::size_t ri = 0; ri < rewards.size(); ++ri) {
        for (const auto& [g, v] : c->rewards[ri]) {
          if (eval(*g, src) != 0.0) cmd_rew[ri] += eval(*v, src);
        }
        if (cmd_rew[ri] < 0.0) {
          throw ModelError("negative transition reward \"" + rewards[ri].name + "\" in " + c->where + " at state " +
                           describe_state(names, src));
        }
      }
      double total = 0.0;
      for (const auto& u : c->updates) {
        const double p = eval(*u.probability, src);
        if (!(p >= 0.0 && p <= 1.0 + dtmc::kStochasticTolerance)) {
          throw ModelError(c->where + ": branch probability " + std::to_string(p) + " outside [0,1] at state " +
                           describe_state(names, src));
        }
        total += p;
        if (p == 0.0) continue;
        dst = src;
        for (const auto& a : u.assignments) {
          const double v = eval(*a.value, src);
          const auto& var = vars[a.slot];
          if (v != std::floor(v) || v < var.lo || v > var.hi) {
            throw ModelError(c->where + ": update sets " + var.name + " to " + std::to_string(v) + ", outside [" +
                             std::to_string(var.lo) + ".." + std::to_string(var.hi) + "], from state " +
                             describe_state(names, src));
          }
          dst[a.slot] = static_cast<int>(v);
        }
        const std::size_t t = intern(dst);
        const double w = pick * p;
        std::size_t k = 0;
        while (k < succ.size() && succ[k].first != t) ++k;
        if (k == succ.size()) {
          succ.emplace_back(t, 0.0);
          succ_rew.emplace_back(rewards.size(), 0.0);
        }
        succ[k].second += w;
        for (std::size_t ri = 0; ri < rewards.size(); ++ri) succ_rew[k][ri] += w * cmd_rew[ri];
      }
      if (std::fabs(total - 1.0) > dtmc::kStochasticTolerance) {
        throw ModelError(c->where + ": branch probabilities sum to " + std::to_string(total) + " at state " +
                         describe_state(names, src));
      }
    }
    for (std::size_t k = 0; k < succ.size(); ++k) {
      prob.push_back({s, succ[k].first, succ[k].second});
      for (std::size_t ri = 0; ri < rewards.size(); ++ri) {
        if (succ_rew[k][ri] != 0.0) trew[ri].push_back({s, succ[k].first, succ_rew[k][ri] / succ[k].second});
      }
    }
  }

  const std::size_t n = index.size();
  std::map<std::string, dtmc::StateSet> label_sets;
  for (const auto& [name, pred] : labels) {
    dtmc::StateSet set(n, false);
    for (std::size_t s = 0; s < n; ++s) {
      set[s] = eval(*pred, std::span<const int>(valuations.data() + s * width, width)) != 0.0;
    }
    label_sets.emplace(name, std::move(set));
  }
  if (opts.init_label && !label_sets.count("init")) label_sets.emplace("init", dtmc::make_set(n, {0}));

  BuiltModel out{dtmc::Dtmc(n, 0, SparseMatrix::from_triplets(n, n, std::move(prob)), std::move(label_sets)), {},
                 std::move(names), {}};
  for (std::size_t ri = 0; ri < rewards.size(); ++ri) {
    std::vector<double> rho(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      const std::span<const int> v(valuations.data() + s * width, width);
      for (const auto& [g, val] : rewards[ri].state_items) {
        if (eval(*g, v) != 0.0) rho[s] += eval(*val, v);
      }
      if (rho[s] < 0.0) {
        throw ModelError("negative state reward \"" + rewards[ri].name + "\" at state " + describe_state(out.variables, v));
      }
    }
    out.rewards.emplace(rewards[ri].name,
                        dtmc::RewardStructure{std::move(rho), SparseMatrix::from_triplets(n, n, std::move(trew[ri]))});
  }
  out.valuations = std::move(valuations);
  return out;
}

}  // namespace rfidqv::gc
