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

#include "rfidqv/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rfidqv/csv.hpp"
#include "rfidqv/errors.hpp"
#include "rfidqv/protocol.hpp"
#include "rfidqv/rng.hpp"

namespace rfidqv::sim {

namespace {

using protocol::Fault;
using protocol::SessionTranscript;

enum class Phase { idle, waiting, in_flight, authenticated };

struct SessionCost {
  double tx = 0, srv = 0, tag = 0;
};

SessionCost cost_of(const rfid::CostTable& c, const SessionTranscript& tr) {
  SessionCost out;
  for (const auto& e : tr.entries) {
    const std::string type = protocol::message_type(e.message);
    if (type == "challenge") out.tx += c.tx_challenge;
    else if (type == "tag_response") out.tx += c.tx_response;
    else if (type == "reader_forward") out.tx += c.tx_forward;
    else if (type == "server_reply") out.tx += c.tx_reply;
    else if (type == "reader_relay") out.tx += c.tx_relay;  // sent even if lost on the air
    else if (type == "server_error") out.tx += c.tx_error;
  }
  out.srv = c.probe_weight * std::pow(static_cast<double>(tr.probes), c.probe_exponent);
  out.tag = tr.tag_accepted ? c.tag_session : c.tag_failed;
  return out;
}

// Running sums for mean and standard error per time point.
struct Accumulator {
  std::vector<double> sum, sum_sq;
  explicit Accumulator(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}
  void add(std::size_t t, double v) {
    sum[t] += v;
    sum_sq[t] += v * v;
  }
  SeriesStat finish(std::size_t runs) const {
    SeriesStat s{std::vector<double>(sum.size()), std::vector<double>(sum.size())};
    const double n = static_cast<double>(runs);
    for (std::size_t t = 0; t < sum.size(); ++t) {
      s.mean[t] = sum[t] / n;
      const double var = runs > 1 ? std::max(0.0, (sum_sq[t] - n * s.mean[t] * s.mean[t]) / (n - 1)) : 0.0;
      s.std_error[t] = std::sqrt(var / n);
    }
    return s;
  }
};

}  // namespace

double ProtocolSeries::throughput(std::size_t from, std::size_t to) const {
  to = std::min(to, sessions.mean.size());
  if (from >= to) throw InvalidArgument("empty throughput window");
  double total = 0.0;
  for (std::size_t t = from; t < to; ++t) total += sessions.mean[t];
  return total / static_cast<double>(to - from);
}

ProtocolSeries simulate_protocol(const rfid::RfidModelConfig& cfg, const protocol::ProtocolConfig& pcfg,
                                 std::size_t horizon, std::size_t runs, std::uint64_t seed) {
  cfg.validate();
  pcfg.validate();
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  if (runs < 1) throw InvalidArgument("at least one run is needed");
  const int n = cfg.N();
  const int cap = cfg.service_rate;
  const auto& costs = cfg.costs;

  Accumulator authenticated(horizon + 1), in_service(horizon + 1), cum_tx(horizon + 1), cum_srv(horizon + 1),
      cum_tag(horizon + 1), cum_reauth(horizon + 1), sessions(horizon);
  ProtocolSeries out;
  out.horizon = horizon;
  out.runs = runs;
  out.seed = seed;
  double delay_sum = 0.0, run_mean_sum = 0.0, run_mean_sq = 0.0;
  std::size_t delay_count = 0, runs_with_delays = 0;

  for (std::size_t run = 0; run < runs; ++run) {
    Rng rng = Rng::stream(seed, run);
    std::vector<protocol::TagState> tags;
    std::vector<protocol::ServerRecord> db;
    for (int i = 0; i < n; ++i) {
      const BitString u = BitString::random(pcfg.l, rng);
      tags.push_back(protocol::make_tag(pcfg, u));
      db.push_back(protocol::make_record(pcfg, u, {static_cast<std::uint8_t>(i)}));
    }
    std::vector<Phase> phase(n, Phase::idle);
    std::vector<std::size_t> request(n, 0);
    std::deque<int> queue;          // waiting tags, first come first served
    std::vector<int> flight;        // admitted last step, in admission order
    std::vector<int> authed_order;  // authenticated tags, in completion order
    std::size_t reauth_next = 0;
    double tx = 0, srv = 0, tagc = 0, reauth_cost = 0;
    double run_delay_sum = 0;
    std::size_t run_delays = 0;

    const auto fault = [&]() {
      if (cfg.fault_prob <= 0.0 || !rng.bernoulli(cfg.fault_prob)) return Fault::none();
      return cfg.fault_mode == rfid::FaultMode::drop_m3 ? Fault::drop_m3() : Fault::corrupt(2);
    };

    for (std::size_t t = 0;; ++t) {
      authenticated.add(t, static_cast<double>(authed_order.size()));
      in_service.add(t, static_cast<double>(flight.size()));
      cum_tx.add(t, tx);
      cum_srv.add(t, srv);
      cum_tag.add(t, tagc);
      cum_reauth.add(t, reauth_cost);
      if (t == horizon) break;

      // 1. Sessions of the tags admitted last step.
      std::vector<int> failed;
      const std::size_t authed_before = authed_order.size();
      for (int i : flight) {
        const SessionTranscript tr = protocol::run_session(pcfg, tags[i], db, rng, fault());
        const SessionCost c = cost_of(costs, tr);
        tx += c.tx;
        srv += c.srv;
        tagc += c.tag;
        if (tr.mutual()) {
          phase[i] = Phase::authenticated;
          authed_order.push_back(i);
          out.delays.push_back({run, i, request[i], t + 1});
          run_delay_sum += static_cast<double>(t + 1 - request[i]);
          ++run_delays;
        } else {
          failed.push_back(i);
        }
      }
      // 2. Spare capacity re-authenticates tags authenticated before this step.
      const int reauth = cfg.reauth ? std::min(cap - static_cast<int>(flight.size()), static_cast<int>(authed_before)) : 0;
      for (int k = 0; k < reauth; ++k) {
        const int i = authed_order[reauth_next % authed_before];
        ++reauth_next;
        const SessionTranscript tr = protocol::run_session(pcfg, tags[i], db, rng, fault());
        const SessionCost c = cost_of(costs, tr);
        tx += c.tx;
        reauth_cost += c.srv + c.tag;
      }
      sessions.add(t, static_cast<double>(flight.size()) + reauth);
      // 3. Admission from the queue as it stood before this step's failures.
      flight.clear();
      const std::size_t admit = std::min<std::size_t>(queue.size(), static_cast<std::size_t>(cap));
      for (std::size_t k = 0; k < admit; ++k) {
        flight.push_back(queue.front());
        phase[queue.front()] = Phase::in_flight;
        queue.pop_front();
      }
      for (int i : failed) {
        phase[i] = Phase::waiting;
        queue.push_back(i);
      }
      // 4. Arrivals, group A then group B.
      for (int g = 0; g < 2; ++g) {
        const int lo = g == 0 ? 0 : cfg.nA;
        const int hi = g == 0 ? cfg.nA : n;
        if (hi == lo || !rng.bernoulli(cfg.arrival_prob)) continue;
        std::vector<int> idle;
        for (int i = lo; i < hi; ++i) {
          if (phase[i] == Phase::idle) idle.push_back(i);
        }
        const std::size_t burst = std::min<std::size_t>(idle.size(), static_cast<std::size_t>(cfg.arrival_batch));
        for (std::size_t k = 0; k < burst; ++k) {
          const std::size_t j = k + static_cast<std::size_t>(rng.below(idle.size() - k));
          std::swap(idle[k], idle[j]);
          phase[idle[k]] = Phase::waiting;
          request[idle[k]] = t + 1;
          queue.push_back(idle[k]);
        }
      }
    }
    out.incomplete += static_cast<std::size_t>(n) - authed_order.size();
    delay_sum += run_delay_sum;
    delay_count += run_delays;
    if (run_delays > 0) {
      const double m = run_delay_sum / static_cast<double>(run_delays);
      run_mean_sum += m;
      run_mean_sq += m * m;
      ++runs_with_delays;
    }
  }

  out.authenticated = authenticated.finish(runs);
  out.in_service = in_service.finish(runs);
  out.cum_tx = cum_tx.finish(runs);
  out.cum_srv = cum_srv.finish(runs);
  out.cum_tag = cum_tag.finish(runs);
  out.cum_reauth = cum_reauth.finish(runs);
  out.sessions = sessions.finish(runs);
  if (delay_count > 0) out.mean_delay = delay_sum / static_cast<double>(delay_count);
  if (runs_with_delays > 1) {
    const double k = static_cast<double>(runs_with_delays);
    const double mean = run_mean_sum / k;
    out.mean_delay_std_error = std::sqrt(std::max(0.0, (run_mean_sq - k * mean * mean) / (k - 1)) / k);
  }
  return out;
}

std::string series_csv(const ProtocolSeries& s) {
  csv::Table table({"t", "authenticated", "in_service", "cum_tx", "cum_srv", "cum_tag"});
  for (std::size_t t = 0; t <= s.horizon; ++t) {
    table.add_numbers({static_cast<double>(t), s.authenticated.mean[t], s.in_service.mean[t], s.cum_tx.mean[t],
                       s.cum_srv.mean[t], s.cum_tag.mean[t]});
  }
  return table.str();
}

std::string delays_csv(const ProtocolSeries& s) {
  csv::Table table({"run", "tag", "request", "completion", "delay"});
  for (const auto& d : s.delays) {
    table.add_numbers({static_cast<double>(d.run), static_cast<double>(d.tag), static_cast<double>(d.request),
                       static_cast<double>(d.completion), static_cast<double>(d.delay())});
  }
  return table.str();
}

}  // namespace rfidqv::sim
