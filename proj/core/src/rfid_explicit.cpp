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

#include "rfidqv/rfid_explicit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "rfidqv/errors.hpp"
#include "rfidqv/rfid_model.hpp"

namespace rfidqv::rfid {

namespace {

using Phases = std::vector<TagPhase>;

std::uint32_t encode(const Phases& x) {
  std::uint32_t code = 0;
  for (std::size_t i = x.size(); i-- > 0;) code = code * 4 + static_cast<std::uint32_t>(x[i]);
  return code;
}

// Uniform subsets of `pool` of the given size, as bit masks over the pool.
std::vector<unsigned> subsets(std::size_t pool, int size) {
  std::vector<unsigned> out;
  for (unsigned mask = 0; mask < (1u << pool); ++mask) {
    if (std::popcount(mask) == size) out.push_back(mask);
  }
  return out;
}

std::vector<std::size_t> with_phase(const Phases& x, std::size_t from, std::size_t to, TagPhase p) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) {
    if (x[i] == p) out.push_back(i);
  }
  return out;
}

struct Outcome {
  double prob;
  Phases next;
};

}  // namespace

Counters ExplicitModel::counters(std::size_t state) const {
  const auto& x = states[state];
  Counters c(8, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool a = static_cast<int>(i) < nA;
    switch (x[i]) {
      case TagPhase::idle: ++c[a ? 0 : 3]; break;
      case TagPhase::waiting: ++c[a ? 1 : 4]; break;
      case TagPhase::authenticated: ++c[a ? 2 : 5]; break;
      case TagPhase::in_flight: ++c[a ? 6 : 7]; break;
    }
  }
  return c;
}

ExplicitModel build_explicit_rfid_model(const RfidModelConfig& cfg) {
  cfg.validate();
  if (cfg.N() > 6) throw InvalidArgument("per-tag model supports at most 6 tags");
  const std::size_t n = static_cast<std::size_t>(cfg.N());
  const std::size_t na = static_cast<std::size_t>(cfg.nA);
  const int cap = cfg.service_rate;
  const int half = (cap + 1) / 2;
  const double p = cfg.arrival_prob;
  const double f = cfg.fault_prob;
  const SessionCosts costs = expected_session_costs(cfg);

  ExplicitModel out;
  out.nA = cfg.nA;
  std::map<std::uint32_t, std::size_t> index;
  std::deque<std::size_t> frontier;
  const auto intern = [&](const Phases& x) {
    auto [it, inserted] = index.try_emplace(encode(x), out.states.size());
    if (inserted) {
      out.states.push_back(x);
      frontier.push_back(it->second);
    }
    return it->second;
  };
  intern(Phases(n, TagPhase::idle));

  std::vector<Triplet> prob;
  std::vector<double> step_tx, step_srv, step_tag, step_reauth;

  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop_front();
    const Phases x = out.states[s];
    const auto flight = with_phase(x, 0, n, TagPhase::in_flight);
    const auto wait_a = with_phase(x, 0, na, TagPhase::waiting);
    const auto wait_b = with_phase(x, na, n, TagPhase::waiting);
    const auto idle_a = with_phase(x, 0, na, TagPhase::idle);
    const auto idle_b = with_phase(x, na, n, TagPhase::idle);
    const int authed = static_cast<int>(with_phase(x, 0, n, TagPhase::authenticated).size());
    const int nf = static_cast<int>(flight.size());
    const int wa = static_cast<int>(wait_a.size()), wb = static_cast<int>(wait_b.size());
    const int ka = std::min(wa, std::max(cap - wb, half));
    const int kb = std::min(wb, cap - ka);
    const int reauth = cfg.reauth ? std::min(cap - nf, authed) : 0;

    if (s >= step_tx.size()) {
      step_tx.resize(s + 1);
      step_srv.resize(s + 1);
      step_tag.resize(s + 1);
      step_reauth.resize(s + 1);
    }
    step_tx[s] = (nf + reauth) * costs.tx;
    step_srv[s] = nf * costs.server;
    step_tag[s] = nf * costs.tag;
    step_reauth[s] = reauth * (costs.server + costs.tag);

    std::vector<Outcome> outcomes{{1.0, x}};
    const auto expand = [&](auto&& branch) {
      std::vector<Outcome> next;
      for (const auto& o : outcomes) branch(o, next);
      outcomes = std::move(next);
    };
    // 1. sessions in flight complete or fail.
    expand([&](const Outcome& o, std::vector<Outcome>& next) {
      for (unsigned mask = 0; mask < (1u << flight.size()); ++mask) {
        const int k = std::popcount(mask);
        const double w = std::pow(f, k) * std::pow(1 - f, nf - k);
        if (w == 0.0) continue;
        Phases y = o.next;
        for (std::size_t i = 0; i < flight.size(); ++i) {
          y[flight[i]] = (mask >> i) & 1u ? TagPhase::waiting : TagPhase::authenticated;
        }
        next.push_back({o.prob * w, std::move(y)});
      }
    });
    // 3. admission of previously waiting tags, uniform within each group.
    const auto admit = [&](const std::vector<std::size_t>& pool, int k) {
      expand([&](const Outcome& o, std::vector<Outcome>& next) {
        const auto choices = subsets(pool.size(), k);
        for (unsigned mask : choices) {
          Phases y = o.next;
          for (std::size_t i = 0; i < pool.size(); ++i) {
            if ((mask >> i) & 1u) y[pool[i]] = TagPhase::in_flight;
          }
          next.push_back({o.prob / static_cast<double>(choices.size()), std::move(y)});
        }
      });
    };
    admit(wait_a, ka);
    admit(wait_b, kb);
    // 4. arrivals.
    const auto arrive = [&](const std::vector<std::size_t>& pool) {
      expand([&](const Outcome& o, std::vector<Outcome>& next) {
        if (p < 1.0) next.push_back({o.prob * (1 - p), o.next});
        const auto choices = subsets(pool.size(), std::min<int>(cfg.arrival_batch, static_cast<int>(pool.size())));
        for (unsigned mask : choices) {
          Phases y = o.next;
          for (std::size_t i = 0; i < pool.size(); ++i) {
            if ((mask >> i) & 1u) y[pool[i]] = TagPhase::waiting;
          }
          next.push_back({o.prob * p / static_cast<double>(choices.size()), std::move(y)});
        }
      });
    };
    arrive(idle_a);
    arrive(idle_b);

    std::map<std::size_t, double> row;
    for (const auto& o : outcomes) row[intern(o.next)] += o.prob;
    for (const auto& [t, w] : row) prob.push_back({s, t, w});
  }

  const std::size_t states = out.states.size();
  std::map<std::string, dtmc::StateSet> labels;
  labels["allauth"] = dtmc::no_states(states);
  labels["saturated"] = dtmc::no_states(states);
  for (int k = 0; k <= cfg.N(); ++k) {
    labels["count_" + std::to_string(k)] = dtmc::no_states(states);
    labels["auth_" + std::to_string(k)] = dtmc::no_states(states);
  }
  std::vector<double> count(states), authed(states), in_service(states), pending(states), busy(states);
  for (std::size_t s = 0; s < states; ++s) {
    const Counters c = out.counters(s);
    const int fl = c[6] + c[7], au = c[2] + c[5];
    const int load = fl + (cfg.reauth ? std::min(cap - fl, au) : 0);
    count[s] = fl + au;
    authed[s] = au;
    in_service[s] = fl;
    pending[s] = c[1] + c[4] + fl;
    busy[s] = load;
    labels["allauth"][s] = au == cfg.N();
    labels["saturated"][s] = load == cap;
    labels["count_" + std::to_string(fl + au)][s] = true;
    labels["auth_" + std::to_string(au)][s] = true;
  }
  labels["init"] = dtmc::make_set(states, {0});

  SparseMatrix p_matrix = SparseMatrix::from_triplets(states, states, prob);
  const auto per_step = [&](const std::vector<double>& cost) {
    std::vector<Triplet> t;
    for (const auto& e : prob) {
      if (cost[e.row] != 0.0) t.push_back({e.row, e.column, cost[e.row]});
    }
    return dtmc::RewardStructure{std::vector<double>(states, 0.0), SparseMatrix::from_triplets(states, states, t)};
  };
  const auto per_state = [&](std::vector<double> rho) {
    return dtmc::RewardStructure{std::move(rho), SparseMatrix(states, states)};
  };
  std::vector<double> both(states);
  for (std::size_t s = 0; s < states; ++s) both[s] = step_srv[s] + step_tag[s];
  out.rewards[kTransmission] = per_step(step_tx);
  out.rewards[kComputation] = per_step(both);
  out.rewards[kServerComputation] = per_step(step_srv);
  out.rewards[kTagComputation] = per_step(step_tag);
  out.rewards[kReauthComputation] = per_step(step_reauth);
  out.rewards[kCount] = per_state(count);
  out.rewards[kAuthenticated] = per_state(authed);
  out.rewards[kInService] = per_state(in_service);
  out.rewards[kPending] = per_state(pending);
  out.rewards[kBusy] = per_state(busy);
  out.dtmc = dtmc::Dtmc(states, 0, std::move(p_matrix), std::move(labels));
  return out;
}

}  // namespace rfidqv::rfid
