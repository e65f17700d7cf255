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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "rfidqv/rng.hpp"

namespace rfidqv::oracle {

Dense dense(const SparseMatrix& m) {
  Dense out(m.rows(), std::vector<double>(m.cols(), 0.0));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (const auto& e : m.row(r)) out[r][e.column] += e.value;
  }
  return out;
}

Dense dense(const dtmc::Dtmc& d) { return dense(d.transitions()); }

std::vector<double> solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-300) throw std::runtime_error("singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

dtmc::StateSet can_reach(const Dense& p, const dtmc::StateSet& via, const dtmc::StateSet& to) {
  const std::size_t n = p.size();
  dtmc::StateSet reach = to;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (reach[s] || !via[s]) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (p[s][t] > 0.0 && reach[t]) {
          reach[s] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return reach;
}

std::vector<double> prob_until(const dtmc::Dtmc& d, const dtmc::StateSet& a, const dtmc::StateSet& b) {
  const Dense p = dense(d);
  const std::size_t n = p.size();
  const auto reach = can_reach(p, a, b);
  std::vector<std::size_t> maybe, index(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (reach[s] && !b[s]) {
      index[s] = maybe.size();
      maybe.push_back(s);
    }
  }
  Dense m(maybe.size(), std::vector<double>(maybe.size(), 0.0));
  std::vector<double> rhs(maybe.size(), 0.0);
  for (std::size_t i = 0; i < maybe.size(); ++i) {
    m[i][i] = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (b[t]) rhs[i] += p[maybe[i]][t];
      else if (reach[t]) m[i][index[t]] -= p[maybe[i]][t];
    }
  }
  const auto x = solve(m, rhs);
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (b[s]) out[s] = 1.0;
    else if (reach[s]) out[s] = x[index[s]];
  }
  return out;
}

std::vector<double> prob_bounded_until(const dtmc::Dtmc& d, const dtmc::StateSet& a, const dtmc::StateSet& b,
                                       std::size_t t) {
  const Dense p = dense(d);
  const std::size_t n = p.size();
  std::vector<double> x(n);
  for (std::size_t s = 0; s < n; ++s) x[s] = b[s] ? 1.0 : 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    std::vector<double> next(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (b[s]) next[s] = 1.0;
      else if (a[s]) {
        for (std::size_t u = 0; u < n; ++u) next[s] += p[s][u] * x[u];
      }
    }
    x = next;
  }
  return x;
}

double bounded_until_by_paths(const dtmc::Dtmc& d, const dtmc::StateSet& a, const dtmc::StateSet& b,
                              std::size_t t) {
  const Dense p = dense(d);
  std::function<double(std::size_t, std::size_t)> walk = [&](std::size_t s, std::size_t left) -> double {
    if (b[s]) return 1.0;
    if (!a[s] || left == 0) return 0.0;
    double total = 0.0;
    for (std::size_t u = 0; u < p.size(); ++u) {
      if (p[s][u] > 0.0) total += p[s][u] * walk(u, left - 1);
    }
    return total;
  };
  return walk(d.initial(), t);
}

std::vector<double> reward_reachability(const dtmc::Dtmc& d, const dtmc::RewardStructure& r,
                                        const dtmc::StateSet& target) {
  const Dense p = dense(d);
  const Dense iota = dense(r.transition_rewards);
  const std::size_t n = p.size();
  const dtmc::StateSet all(n, true);
  // Reaching a state that cannot reach the target makes the reward infinite.
  const auto reach = can_reach(p, all, target);
  dtmc::StateSet lost(n, false);
  for (std::size_t s = 0; s < n; ++s) lost[s] = !reach[s];
  dtmc::StateSet not_target(n, false);
  for (std::size_t s = 0; s < n; ++s) not_target[s] = !target[s];
  const auto infinite = can_reach(p, not_target, lost);

  std::vector<std::size_t> live, index(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (!target[s] && !infinite[s]) {
      index[s] = live.size();
      live.push_back(s);
    }
  }
  Dense m(live.size(), std::vector<double>(live.size(), 0.0));
  std::vector<double> rhs(live.size(), 0.0);
  for (std::size_t i = 0; i < live.size(); ++i) {
    const std::size_t s = live[i];
    m[i][i] = 1.0;
    rhs[i] = r.state_rewards[s];
    for (std::size_t u = 0; u < n; ++u) {
      rhs[i] += p[s][u] * iota[s][u];
      if (!target[u] && p[s][u] > 0.0) m[i][index[u]] -= p[s][u];
    }
  }
  const auto x = solve(m, rhs);
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (infinite[s] && !target[s]) out[s] = std::numeric_limits<double>::infinity();
    else if (!target[s]) out[s] = x[index[s]];
  }
  return out;
}

namespace {

std::vector<double> distribution(const Dense& p, std::size_t initial, std::size_t t) {
  std::vector<double> pi(p.size(), 0.0);
  pi[initial] = 1.0;
  for (std::size_t k = 0; k < t; ++k) {
    std::vector<double> next(p.size(), 0.0);
    for (std::size_t s = 0; s < p.size(); ++s) {
      for (std::size_t u = 0; u < p.size(); ++u) next[u] += pi[s] * p[s][u];
    }
    pi = next;
  }
  return pi;
}

}  // namespace

double reward_instantaneous(const dtmc::Dtmc& d, const dtmc::RewardStructure& r, std::size_t t) {
  const auto pi = distribution(dense(d), d.initial(), t);
  double total = 0.0;
  for (std::size_t s = 0; s < pi.size(); ++s) total += pi[s] * r.state_rewards[s];
  return total;
}

double reward_cumulative(const dtmc::Dtmc& d, const dtmc::RewardStructure& r, std::size_t t) {
  const Dense p = dense(d);
  const Dense iota = dense(r.transition_rewards);
  double total = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    const auto pi = distribution(p, d.initial(), k);
    for (std::size_t s = 0; s < p.size(); ++s) {
      double step = r.state_rewards[s];
      for (std::size_t u = 0; u < p.size(); ++u) step += p[s][u] * iota[s][u];
      total += pi[s] * step;
    }
  }
  return total;
}

std::vector<double> limit_distribution(const dtmc::Dtmc& d, int squarings) {
  Dense p = dense(d);
  const std::size_t n = p.size();
  for (int k = 0; k < squarings; ++k) {
    Dense q(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (p[i][j] == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) q[i][c] += p[i][j] * p[j][c];
      }
    }
    // Renormalise so rounding in the row sums does not compound.
    for (auto& row : q) {
      double sum = 0.0;
      for (double v : row) sum += v;
      for (double& v : row) v /= sum;
    }
    p = std::move(q);
  }
  return p[d.initial()];
}

RandomChain random_chain(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Triplet> edges, rewards;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(3, n));
    std::vector<std::size_t> succ;
    while (succ.size() < k) {
      const std::size_t t = rng.below(n);
      if (std::find(succ.begin(), succ.end(), t) == succ.end()) succ.push_back(t);
    }
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& x : w) sum += (x = 0.1 + rng.uniform());
    for (std::size_t i = 0; i < k; ++i) {
      edges.push_back({s, succ[i], w[i] / sum});
      if (rng.bernoulli(0.4)) rewards.push_back({s, succ[i], std::floor(rng.uniform() * 40.0) / 8.0});
    }
  }
  std::vector<std::size_t> a, b;
  std::vector<double> rho(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (rng.bernoulli(0.6)) a.push_back(s);
    if (rng.bernoulli(0.25)) b.push_back(s);
    if (rng.bernoulli(0.5)) rho[s] = std::floor(rng.uniform() * 24.0) / 8.0;
  }
  if (b.empty()) b.push_back(n - 1);
  std::map<std::string, dtmc::StateSet> labels{{"a", dtmc::make_set(n, a)}, {"b", dtmc::make_set(n, b)}};
  RandomChain out;
  out.dtmc = dtmc::Dtmc(n, 0, SparseMatrix::from_triplets(n, n, edges), std::move(labels));
  out.rewards.state_rewards = std::move(rho);
  out.rewards.transition_rewards = SparseMatrix::from_triplets(n, n, rewards);
  return out;
}

std::vector<RandomChain> corpus() {
  std::vector<RandomChain> out;
  for (std::size_t i = 0; i < 20; ++i) out.push_back(random_chain(1000 + i, 2 + (i * 18) / 19));
  return out;
}

}  // namespace rfidqv::oracle
