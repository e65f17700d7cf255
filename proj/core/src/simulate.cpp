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

#include "rfidqv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <variant>

#include "rfidqv/analysis.hpp"
#include "rfidqv/errors.hpp"
#include "rfidqv/rng.hpp"

namespace rfidqv::sim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t sample(const SparseMatrix& p, std::size_t s, Rng& rng) {
  const auto row = p.row(s);
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& e : row) {
    acc += e.value;
    if (u < acc) return e.column;
  }
  return row.back().column;  // rounding slack in the last cumulative sum
}

// Welford accumulator; an infinite sample makes the mean infinite.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  bool infinite = false;

  void add(double x) {
    if (std::isinf(x)) {
      infinite = true;
      return;
    }
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
};

}  // namespace

SimReport simulate_dtmc(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const pctl::Formula& query,
                        const SimOptions& opts) {
  if (opts.runs == 0) throw InvalidArgument("simulation needs at least one run");
  const auto& p = d.transitions();
  SimReport report;
  report.runs = opts.runs;
  report.seed = opts.seed;
  Moments acc;

  // Per-run sampler; sets the flag when the step cap ends the run.
  std::function<double(Rng&, bool&)> run_once;

  if (const auto* q = std::get_if<pctl::ProbQuery>(&query.node)) {
    if (!q->bound.is_query()) throw InvalidArgument("simulation needs a '=?' query");
    const auto sat = [&](const pctl::FormulaPtr& f) { return pctl::satisfying(d, rewards, *f, opts.eval); };
    std::visit(Overloaded{
                   [&](const pctl::Next& x) {
                     auto target = sat(x.operand);
                     run_once = [&p, &d, target](Rng& rng, bool&) {
                       return target[sample(p, d.initial(), rng)] ? 1.0 : 0.0;
                     };
                   },
                   [&](const pctl::BoundedUntil& u) {
                     auto a = sat(u.lhs), b = sat(u.rhs);
                     const std::size_t t = u.bound;
                     run_once = [&p, &d, a, b, t](Rng& rng, bool&) {
                       std::size_t s = d.initial();
                       for (std::size_t k = 0;; ++k) {
                         if (b[s]) return 1.0;
                         if (!a[s] || k == t) return 0.0;
                         s = sample(p, s, rng);
                       }
                     };
                   },
                   [&](const pctl::Until& u) {
                     auto a = sat(u.lhs), b = sat(u.rhs);
                     // Paths entering a state that cannot reach b are decided.
                     auto hopeless = dtmc::prob0(d, a, b);
                     const std::size_t cap = opts.step_cap;
                     run_once = [&p, &d, a, b, hopeless, cap](Rng& rng, bool& capped) {
                       std::size_t s = d.initial();
                       for (std::size_t k = 0;; ++k) {
                         if (b[s]) return 1.0;
                         if (!a[s] || hopeless[s]) return 0.0;
                         if (k == cap) {
                           capped = true;
                           return 0.0;
                         }
                         s = sample(p, s, rng);
                       }
                     };
                   },
               },
               q->path);
  } else if (const auto* q = std::get_if<pctl::RewardQuery>(&query.node)) {
    if (!q->bound.is_query()) throw InvalidArgument("simulation needs a '=?' query");
    const auto& r = pctl::select_reward(rewards, *q, opts.eval);
    const auto& rho = r.state_rewards;
    const auto& iota = r.transition_rewards;
    std::visit(Overloaded{
                   [&](const pctl::Instantaneous& i) {
                     const std::size_t t = i.t;
                     run_once = [&p, &d, &rho, t](Rng& rng, bool&) {
                       std::size_t s = d.initial();
                       for (std::size_t k = 0; k < t; ++k) s = sample(p, s, rng);
                       return rho[s];
                     };
                   },
                   [&](const pctl::Cumulative& c) {
                     const std::size_t t = c.t;
                     run_once = [&p, &d, &rho, &iota, t](Rng& rng, bool&) {
                       std::size_t s = d.initial();
                       double total = 0.0;
                       for (std::size_t k = 0; k < t; ++k) {
                         const std::size_t next = sample(p, s, rng);
                         total += rho[s] + iota.at(s, next);
                         s = next;
                       }
                       return total;
                     };
                   },
                   [&](const pctl::Reachability& f) {
                     auto target = pctl::satisfying(d, rewards, *f.target, opts.eval);
                     auto lost = dtmc::prob0(d, dtmc::all_states(d.n_states()), target);
                     const std::size_t cap = opts.step_cap;
                     run_once = [&p, &d, &rho, &iota, target, lost, cap](Rng& rng, bool& capped) {
                       std::size_t s = d.initial();
                       double total = 0.0;
                       for (std::size_t k = 0;; ++k) {
                         if (target[s]) return total;
                         if (lost[s]) return dtmc::kInfinity;
                         if (k == cap) {
                           capped = true;
                           return total;
                         }
                         const std::size_t next = sample(p, s, rng);
                         total += rho[s] + iota.at(s, next);
                         s = next;
                       }
                     };
                   },
                   [&](const pctl::SteadyState&) {
                     if (opts.window < kMinSteadyWindow) {
                       throw InvalidArgument("long-run simulation needs a window of at least " +
                                             std::to_string(kMinSteadyWindow) + " steps");
                     }
                     const std::size_t burn = opts.burn_in, window = opts.window;
                     run_once = [&p, &d, &rho, &iota, burn, window](Rng& rng, bool&) {
                       std::size_t s = d.initial();
                       for (std::size_t k = 0; k < burn; ++k) s = sample(p, s, rng);
                       double total = 0.0;
                       for (std::size_t k = 0; k < window; ++k) {
                         const std::size_t next = sample(p, s, rng);
                         total += rho[s] + iota.at(s, next);
                         s = next;
                       }
                       return total / static_cast<double>(window);
                     };
                   },
               },
               q->form);
  } else {
    throw InvalidArgument("simulation needs a P=? or R=? query");
  }

  for (std::size_t i = 0; i < opts.runs; ++i) {
    Rng rng = Rng::stream(opts.seed, i);
    bool capped = false;
    acc.add(run_once(rng, capped));
    if (capped) ++report.capped_runs;
  }
  if (acc.infinite) {
    report.estimate = dtmc::kInfinity;
    report.std_error = 0.0;
    return report;
  }
  report.estimate = acc.mean;
  report.std_error =
      acc.n > 1 ? std::sqrt(acc.m2 / static_cast<double>(acc.n - 1)) / std::sqrt(static_cast<double>(acc.n)) : 0.0;
  return report;
}

Comparison compare(double analytic, const SimReport& sim, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  Comparison c{false, analytic, sim.estimate, sim.std_error, {}};
  if (std::isinf(analytic) || std::isinf(sim.estimate)) {
    c.pass = analytic == sim.estimate;
  } else {
    // The slack absorbs rounding when both sides are computed exactly.
    const double slack = 1e-9 * std::max({1.0, std::fabs(analytic), std::fabs(sim.estimate)});
    c.pass = std::fabs(analytic - sim.estimate) <= sigma * sim.std_error + slack;
  }
  char buf[256];
  const double dev = sim.std_error > 0 ? std::fabs(analytic - sim.estimate) / sim.std_error : 0.0;
  std::snprintf(buf, sizeof buf, "%s: analytic=%.10g simulated=%.10g std_error=%.3g deviation=%.2f sigma (limit %.2f)",
                c.pass ? "pass" : "FAIL", analytic, sim.estimate, sim.std_error, dev, sigma);
  c.report = buf;
  if (sim.unreliable()) c.report += " [unreliable: step cap hit]";
  if (sim.low_confidence()) c.report += " [low confidence: few runs]";
  return c;
}

}  // namespace rfidqv::sim
