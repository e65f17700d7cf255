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

#include "rfidqv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "rfidqv/errors.hpp"

namespace rfidqv::dtmc {

namespace {

void require_size(const Dtmc& d, const StateSet& s, const char* what) {
  if (s.size() != d.n_states()) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(s.size()) + " entries, chain has " +
                          std::to_string(d.n_states()) + " states");
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

/// In-place Gauss-Seidel for x(s) = c(s) + sum_s' P(s,s') x(s') over the
/// states in `unknown`; every other entry of x is held fixed.
void gauss_seidel(const Dtmc& d, const std::vector<std::size_t>& unknown, const std::vector<double>& c,
                  std::vector<double>& x, const SolverOptions& opts) {
  if (unknown.empty()) return;
  const auto& p = d.transitions();
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    double max_diff = 0.0;
    for (auto it = unknown.rbegin(); it != unknown.rend(); ++it) {
      const std::size_t s = *it;
      double sum = c[s];
      double diag = 0.0;
      for (const auto& e : p.row(s)) {
        if (e.column == s) {
          diag += e.value;
        } else {
          sum += e.value * x[e.column];
        }
      }
      if (diag >= 1.0) throw NumericalError("singular system at state " + std::to_string(s));
      const double next = sum / (1.0 - diag);
      max_diff = std::max(max_diff, std::abs(next - x[s]));
      x[s] = next;
    }
    if (max_diff <= opts.epsilon) return;
  }
  throw NumericalError("Gauss-Seidel did not converge within " + std::to_string(opts.max_iterations) +
                       " iterations");
}

/// Backward closure of `seed` through predecessors that satisfy `allowed`.
StateSet backward_closure(const SparseMatrix& transposed, StateSet seed, const StateSet& allowed) {
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < seed.size(); ++s) {
    if (seed[s]) queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const auto& e : transposed.row(v)) {
      const std::size_t u = e.column;
      if (!seed[u] && allowed[u] && e.value > 0.0) {
        seed[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seed;
}

StateSet reachable_from_initial(const Dtmc& d) {
  StateSet seen(d.n_states(), false);
  std::deque<std::size_t> queue{d.initial()};
  seen[d.initial()] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& e : d.transitions().row(u)) {
      if (e.value > 0.0 && !seen[e.column]) {
        seen[e.column] = true;
        queue.push_back(e.column);
      }
    }
  }
  return seen;
}

/// Iterative Tarjan over the states in `within`; returns component ids
/// (npos outside `within`) and the component count.
std::pair<std::vector<std::size_t>, std::size_t> strongly_connected(const Dtmc& d, const StateSet& within) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  const std::size_t n = d.n_states();
  const auto& p = d.transitions();
  std::vector<std::size_t> index(n, npos), low(n, 0), comp(n, npos);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (state, next edge offset)
  std::size_t counter = 0;
  std::size_t n_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (!within[root] || index[root] != npos) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      const auto row = p.row(v);
      if (edge < row.size()) {
        const auto& e = row[edge++];
        const std::size_t w = e.column;
        if (!within[w] || e.value <= 0.0) continue;
        if (index[w] == npos) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
      if (low[finished] == index[finished]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = n_comp;
        } while (w != finished);
        ++n_comp;
      }
    }
  }
  return {comp, n_comp};
}

std::size_t component_period(const Dtmc& d, const std::vector<std::size_t>& component) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(d.n_states(), npos);
  StateSet in(d.n_states(), false);
  for (auto s : component) in[s] = true;
  std::deque<std::size_t> queue{component.front()};
  level[component.front()] = 0;
  std::size_t g = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& e : d.transitions().row(u)) {
      if (e.value <= 0.0 || !in[e.column]) continue;
      const std::size_t v = e.column;
      if (level[v] == npos) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        g = std::gcd(g, static_cast<std::size_t>(std::llabs(diff)));
      }
    }
  }
  return g;
}

std::string describe(const std::vector<std::vector<std::size_t>>& comps) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(comps.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    out += i ? ", {" : "{";
    const std::size_t k = std::min<std::size_t>(comps[i].size(), 8);
    for (std::size_t j = 0; j < k; ++j) out += (j ? "," : "") + std::to_string(comps[i][j]);
    if (comps[i].size() > k) out += ",...";
    out += "}";
  }
  if (comps.size() > shown) out += ", ...";
  return out;
}

}  // namespace

std::vector<double> step(const Dtmc& d, const std::vector<double>& pi) {
  std::vector<double> next(d.n_states(), 0.0);
  const auto& p = d.transitions();
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    if (pi[s] == 0.0) continue;
    for (const auto& e : p.row(s)) next[e.column] += pi[s] * e.value;
  }
  return next;
}

std::vector<double> transient_distribution(const Dtmc& d, std::size_t t) {
  std::vector<double> pi(d.n_states(), 0.0);
  pi[d.initial()] = 1.0;
  for (std::size_t k = 0; k < t; ++k) pi = step(d, pi);
  return pi;
}

std::vector<double> prob_next(const Dtmc& d, const StateSet& target) {
  require_size(d, target, "target");
  std::vector<double> out(d.n_states(), 0.0);
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    for (const auto& e : d.transitions().row(s)) {
      if (target[e.column]) out[s] += e.value;
    }
  }
  return out;
}

std::vector<double> prob_bounded_until(const Dtmc& d, const StateSet& a, const StateSet& b, std::size_t t) {
  require_size(d, a, "left operand");
  require_size(d, b, "right operand");
  const std::size_t n = d.n_states();
  std::vector<double> x(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) x[s] = b[s] ? 1.0 : 0.0;
  std::vector<double> next(n);
  for (std::size_t k = 0; k < t; ++k) {
    for (std::size_t s = 0; s < n; ++s) {
      if (b[s]) {
        next[s] = 1.0;
      } else if (!a[s]) {
        next[s] = 0.0;
      } else {
        double sum = 0.0;
        for (const auto& e : d.transitions().row(s)) sum += e.value * x[e.column];
        next[s] = std::min(sum, 1.0);
      }
    }
    std::swap(x, next);
  }
  return x;
}

StateSet prob0(const Dtmc& d, const StateSet& a, const StateSet& b) {
  require_size(d, a, "left operand");
  require_size(d, b, "right operand");
  const StateSet can_reach = backward_closure(d.transitions().transpose(), b, a);
  StateSet out(d.n_states());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = !can_reach[s];
  return out;
}

StateSet prob1(const Dtmc& d, const StateSet& a, const StateSet& b) {
  const StateSet no = prob0(d, a, b);
  StateSet a_not_b(d.n_states());
  for (std::size_t s = 0; s < a_not_b.size(); ++s) a_not_b[s] = a[s] && !b[s];
  const StateSet may_fail = backward_closure(d.transitions().transpose(), no, a_not_b);
  StateSet out(d.n_states());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = !may_fail[s];
  return out;
}

std::vector<double> prob_until(const Dtmc& d, const StateSet& a, const StateSet& b, const SolverOptions& opts) {
  const StateSet no = prob0(d, a, b);
  const StateSet yes = prob1(d, a, b);
  const std::size_t n = d.n_states();
  std::vector<double> x(n, 0.0);
  std::vector<std::size_t> maybe;
  for (std::size_t s = 0; s < n; ++s) {
    if (yes[s]) {
      x[s] = 1.0;
    } else if (!no[s]) {
      maybe.push_back(s);
    }
  }
  gauss_seidel(d, maybe, std::vector<double>(n, 0.0), x, opts);
  return x;
}

double reward_instantaneous(const Dtmc& d, const RewardStructure& r, std::size_t t) {
  return dot(transient_distribution(d, t), r.state_rewards);
}

double reward_cumulative(const Dtmc& d, const RewardStructure& r, std::size_t t) {
  return cumulative_series(d, r, t).back();
}

std::vector<double> instantaneous_series(const Dtmc& d, const RewardStructure& r, std::size_t horizon) {
  std::vector<double> out;
  out.reserve(horizon + 1);
  std::vector<double> pi(d.n_states(), 0.0);
  pi[d.initial()] = 1.0;
  for (std::size_t t = 0;; ++t) {
    out.push_back(dot(pi, r.state_rewards));
    if (t == horizon) break;
    pi = step(d, pi);
  }
  return out;
}

std::vector<double> cumulative_series(const Dtmc& d, const RewardStructure& r, std::size_t horizon) {
  const std::vector<double> per_step = expected_step_reward(d, r);
  std::vector<double> out;
  out.reserve(horizon + 1);
  out.push_back(0.0);
  std::vector<double> pi(d.n_states(), 0.0);
  pi[d.initial()] = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    out.push_back(out.back() + dot(pi, per_step));
    if (t + 1 < horizon) pi = step(d, pi);
  }
  return out;
}

std::vector<double> reward_reachability_states(const Dtmc& d, const RewardStructure& r, const StateSet& target,
                                               const SolverOptions& opts) {
  require_size(d, target, "target");
  const std::size_t n = d.n_states();
  const StateSet finite = prob1(d, all_states(n), target);
  std::vector<double> x(n, 0.0);
  std::vector<std::size_t> unknown;
  for (std::size_t s = 0; s < n; ++s) {
    if (!finite[s]) {
      x[s] = kInfinity;
    } else if (!target[s]) {
      unknown.push_back(s);
    }
  }
  gauss_seidel(d, unknown, expected_step_reward(d, r), x, opts);
  return x;
}

double reward_reachability(const Dtmc& d, const RewardStructure& r, const StateSet& target,
                           const SolverOptions& opts) {
  return reward_reachability_states(d, r, target, opts)[d.initial()];
}

std::vector<std::vector<std::size_t>> bottom_components(const Dtmc& d) {
  const StateSet reach = reachable_from_initial(d);
  const auto [comp, n_comp] = strongly_connected(d, reach);
  std::vector<bool> bottom(n_comp, true);
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    if (!reach[s]) continue;
    for (const auto& e : d.transitions().row(s)) {
      if (e.value > 0.0 && comp[e.column] != comp[s]) bottom[comp[s]] = false;
    }
  }
  std::vector<std::vector<std::size_t>> by_id(n_comp);
  for (std::size_t s = 0; s < d.n_states(); ++s) {
    if (reach[s] && bottom[comp[s]]) by_id[comp[s]].push_back(s);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& c : by_id) {
    if (!c.empty()) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> steady_state_distribution(const Dtmc& d, const SolverOptions& opts) {
  const auto bottoms = bottom_components(d);
  if (bottoms.size() != 1) {
    throw UnsupportedStructure(
        "long-run query needs a single bottom component; found " + std::to_string(bottoms.size()) + ": " +
            describe(bottoms),
        bottoms);
  }
  const auto& component = bottoms.front();
  if (const std::size_t period = component_period(d, component); period != 1) {
    throw UnsupportedStructure("bottom component " + describe(bottoms) + " is periodic with period " +
                                   std::to_string(period),
                               bottoms);
  }
  const std::size_t n = d.n_states();
  std::vector<double> pi(n, 0.0);
  for (auto s : component) pi[s] = 1.0 / static_cast<double>(component.size());
  if (component.size() == 1) return pi;

  // pi_j = sum_{i != j} pi_i P(i,j) / (1 - P(j,j)), renormalised per sweep.
  const SparseMatrix incoming = d.transitions().transpose();
  std::vector<double> previous(n, 0.0);
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    previous = pi;
    for (auto j : component) {
      double sum = 0.0;
      double diag = 0.0;
      for (const auto& e : incoming.row(j)) {
        if (e.column == j) {
          diag += e.value;
        } else {
          sum += pi[e.column] * e.value;
        }
      }
      pi[j] = sum / (1.0 - diag);
    }
    double total = 0.0;
    for (auto j : component) total += pi[j];
    double max_diff = 0.0;
    for (auto j : component) {
      pi[j] /= total;
      max_diff = std::max(max_diff, std::abs(pi[j] - previous[j]));
    }
    if (max_diff <= opts.epsilon) return pi;
  }
  throw NumericalError("stationary distribution did not converge within " + std::to_string(opts.max_iterations) +
                       " iterations");
}

double reward_steady_state(const Dtmc& d, const RewardStructure& r, const SolverOptions& opts) {
  return dot(steady_state_distribution(d, opts), expected_step_reward(d, r));
}

}  // namespace rfidqv::dtmc
