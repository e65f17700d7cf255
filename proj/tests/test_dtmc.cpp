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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "rfidqv/analysis.hpp"
#include "rfidqv/dtmc_io.hpp"
#include "rfidqv/errors.hpp"

using namespace rfidqv;
using namespace rfidqv::dtmc;

namespace {

Dtmc chain(std::size_t n, std::vector<Triplet> edges, std::map<std::string, StateSet> labels = {},
           std::size_t initial = 0) {
  return Dtmc(n, initial, SparseMatrix::from_triplets(n, n, std::move(edges)), std::move(labels));
}

// 0 -p-> 1 (done), 0 -(1-p)-> 0; one unit of reward per step in 0.
Dtmc geometric(double p) {
  return chain(2, {{0, 1, p}, {0, 0, 1 - p}, {1, 1, 1.0}}, {{"done", make_set(2, {1})}});
}

// Symmetric random walk on 0..n absorbed at both ends, started in the middle.
Dtmc gamblers_ruin(std::size_t n) {
  std::vector<Triplet> e{{0, 0, 1.0}, {n, n, 1.0}};
  for (std::size_t s = 1; s < n; ++s) {
    e.push_back({s, s - 1, 0.5});
    e.push_back({s, s + 1, 0.5});
  }
  return chain(n + 1, e, {{"win", make_set(n + 1, {n})}}, n / 2);
}

}  // namespace

TEST_CASE("sparse matrix sums duplicates and sorts rows") {
  const auto m = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 0.5}, {0, 2, 0.25}, {1, 1, 2.0}});
  CHECK(m.nnz() == 3);
  CHECK(m.at(0, 2) == 1.25);
  CHECK(m.row(0)[0].column == 0);
  CHECK(m.at(1, 0) == 0.0);
  CHECK_FALSE(m.contains(1, 0));
  CHECK(m.transpose().at(2, 0) == 1.25);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), InvalidArgument);
}

TEST_CASE("validation reports every violated invariant") {
  const auto bad = chain(2, {{0, 0, 0.5}, {1, 1, 1.0}});
  CHECK(validate(bad).size() == 1);
  CHECK(validate(geometric(0.5)).empty());
  RewardStructure r = RewardStructure::zero(geometric(0.5));
  r.state_rewards[0] = -1.0;
  CHECK_FALSE(validate(geometric(0.5), r).empty());
}

TEST_CASE("geometric chain: expected steps to done is 1/p") {
  for (double p : {0.5, 0.25, 0.1}) {
    const auto d = geometric(p);
    RewardStructure r = RewardStructure::zero(d);
    r.state_rewards[0] = 1.0;
    CHECK(std::fabs(reward_reachability(d, r, d.label("done")) - 1.0 / p) <= 1e-8);
    CHECK(prob_until(d, all_states(2), d.label("done"))[0] == doctest::Approx(1.0).epsilon(1e-12));
    // P(done within t) = 1 - (1-p)^t
    CHECK(prob_bounded_until(d, all_states(2), d.label("done"), 5)[0] ==
          doctest::Approx(1.0 - std::pow(1 - p, 5)).epsilon(1e-12));
  }
}

TEST_CASE("gambler's ruin from the middle wins with probability one half") {
  for (std::size_t n : {2, 4}) {
    const auto d = gamblers_ruin(n);
    const auto x = prob_until(d, all_states(n + 1), d.label("win"));
    CHECK(std::fabs(x[n / 2] - 0.5) <= 1e-8);
    // From state s the winning probability is s/n.
    for (std::size_t s = 0; s <= n; ++s) CHECK(std::fabs(x[s] - double(s) / n) <= 1e-8);
  }
  // Stopping on successive differences of 1e-8 leaves an error of about
  // 1e-8 / (1 - rho); rho approaches 1 as the walk gets longer.
  const auto mid = gamblers_ruin(6);
  CHECK(std::fabs(prob_until(mid, all_states(7), mid.label("win"))[3] - 0.5) <= 1e-7);
  const auto d = gamblers_ruin(20);
  CHECK(std::fabs(prob_until(d, all_states(21), d.label("win"))[10] - 0.5) <= 1e-6);
}

TEST_CASE("qualitative precomputation") {
  const auto d = chain(4, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 1, 1.0}, {2, 3, 1.0}, {3, 3, 1.0}},
                       {{"goal", make_set(4, {3})}});
  const auto a = all_states(4);
  CHECK(members(prob0(d, a, d.label("goal"))) == std::vector<std::size_t>{1});
  CHECK(members(prob1(d, a, d.label("goal"))) == std::vector<std::size_t>{2, 3});
  // 0 reaches the goal only half the time, so its expected reward is infinite.
  RewardStructure r = RewardStructure::zero(d);
  r.state_rewards = {1, 1, 1, 0};
  const auto x = reward_reachability_states(d, r, d.label("goal"));
  CHECK(std::isinf(x[0]));
  CHECK(std::isinf(x[1]));
  CHECK(x[2] == 1.0);
  CHECK(x[3] == 0.0);
}

TEST_CASE("instantaneous and cumulative rewards on a two-step cycle") {
  const auto d = chain(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  RewardStructure r = RewardStructure::zero(d);
  r.state_rewards = {1.0, 3.0};
  r.transition_rewards = SparseMatrix::from_triplets(2, 2, {{0, 1, 10.0}});
  CHECK(reward_instantaneous(d, r, 0) == 1.0);
  CHECK(reward_instantaneous(d, r, 1) == 3.0);
  CHECK(reward_cumulative(d, r, 0) == 0.0);
  CHECK(reward_cumulative(d, r, 1) == 11.0);
  CHECK(reward_cumulative(d, r, 3) == 25.0);
  const auto series = cumulative_series(d, r, 3);
  CHECK(series == std::vector<double>{0.0, 11.0, 14.0, 25.0});
  CHECK(instantaneous_series(d, r, 2) == std::vector<double>{1.0, 3.0, 1.0});
}

TEST_CASE("steady state of a two-state chain") {
  const double p = 0.3, q = 0.1;
  const auto d = chain(2, {{0, 1, p}, {0, 0, 1 - p}, {1, 0, q}, {1, 1, 1 - q}});
  const auto pi = steady_state_distribution(d);
  CHECK(std::fabs(pi[0] - q / (p + q)) < 1e-7);
  CHECK(std::fabs(pi[1] - p / (p + q)) < 1e-7);
  RewardStructure r = RewardStructure::zero(d);
  r.state_rewards = {0.0, 2.0};
  CHECK(std::fabs(reward_steady_state(d, r) - 2.0 * p / (p + q)) < 1e-6);
}

TEST_CASE("steady state with a transient prefix is zero on transient states") {
  const auto d = chain(3, {{0, 1, 1.0}, {1, 2, 0.5}, {1, 1, 0.5}, {2, 1, 0.5}, {2, 2, 0.5}});
  const auto pi = steady_state_distribution(d);
  CHECK(pi[0] == 0.0);
  CHECK(std::fabs(pi[1] - 0.5) < 1e-7);
}

TEST_CASE("steady state rejects periodic and multi-component chains") {
  const auto cycle = chain(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  CHECK_THROWS_AS(steady_state_distribution(cycle), UnsupportedStructure);
  const auto split = chain(3, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 1, 1.0}, {2, 2, 1.0}});
  try {
    steady_state_distribution(split);
    FAIL("expected UnsupportedStructure");
  } catch (const UnsupportedStructure& e) {
    CHECK(e.components().size() == 2);
  }
  CHECK(bottom_components(split).size() == 2);
}

TEST_CASE("solver cap raises a numerical error") {
  const auto d = gamblers_ruin(10);
  SolverOptions opts;
  opts.max_iterations = 3;
  CHECK_THROWS_AS(prob_until(d, all_states(11), d.label("win"), opts), NumericalError);
  RewardStructure r = RewardStructure::zero(d);
  r.state_rewards = std::vector<double>(11, 1.0);
  const auto ends = make_set(11, {0, 10});
  CHECK_THROWS_AS(reward_reachability(d, r, ends, opts), NumericalError);
  // Expected duration of the fair walk from the middle is k(n-k) = 25.
  CHECK(reward_reachability(d, r, ends) == doctest::Approx(25.0).epsilon(1e-7));
}

TEST_CASE("engine agrees with the dense direct-solve oracle") {
  std::size_t checked = 0;
  for (const auto& c : oracle::corpus()) {
    const auto& d = c.dtmc;
    CAPTURE(d.n_states());
    const auto& a = d.label("a");
    const auto& b = d.label("b");
    const auto until = prob_until(d, a, b);
    const auto until_ref = oracle::prob_until(d, a, b);
    const auto rew = reward_reachability_states(d, c.rewards, b);
    const auto rew_ref = oracle::reward_reachability(d, c.rewards, b);
    for (std::size_t s = 0; s < d.n_states(); ++s) {
      CHECK(std::fabs(until[s] - until_ref[s]) <= 1e-7);
      if (std::isinf(rew_ref[s])) CHECK(std::isinf(rew[s]));
      else CHECK(std::fabs(rew[s] - rew_ref[s]) <= 1e-7 * std::max(1.0, rew_ref[s]));
    }
    const auto bounded = prob_bounded_until(d, a, b, 6);
    const auto bounded_ref = oracle::prob_bounded_until(d, a, b, 6);
    for (std::size_t s = 0; s < d.n_states(); ++s) CHECK(std::fabs(bounded[s] - bounded_ref[s]) <= 1e-12);
    if (d.n_states() <= 8) {
      CHECK(std::fabs(bounded[d.initial()] - oracle::bounded_until_by_paths(d, a, b, 6)) <= 1e-12);
    }
    CHECK(std::fabs(reward_cumulative(d, c.rewards, 9) - oracle::reward_cumulative(d, c.rewards, 9)) <= 1e-9);
    CHECK(std::fabs(reward_instantaneous(d, c.rewards, 9) - oracle::reward_instantaneous(d, c.rewards, 9)) <= 1e-12);
    try {
      const auto pi = steady_state_distribution(d);
      const auto ref = oracle::limit_distribution(d);
      for (std::size_t s = 0; s < d.n_states(); ++s) CHECK(std::fabs(pi[s] - ref[s]) <= 1e-6);
    } catch (const UnsupportedStructure&) {
      // Not defined for this chain.
    }
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("explicit file format round-trips exactly") {
  const auto c = oracle::random_chain(99, 7);
  const std::string text = to_text(c.dtmc, &c.rewards);
  const auto back = parse_dtmc(text);
  CHECK(back.dtmc == c.dtmc);
  REQUIRE(back.rewards.has_value());
  CHECK(*back.rewards == c.rewards);
  CHECK(to_text(back.dtmc, &*back.rewards) == text);
}

TEST_CASE("explicit file errors name the line") {
  try {
    parse_dtmc("dtmc 2 0\n0 1 1.0\n1 x 1.0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_dtmc(""), ParseError);
  CHECK_THROWS_AS(parse_dtmc("dtmc 2 0\n0 5 1\n"), ParseError);
}

TEST_CASE("transient distribution") {
  const auto d = geometric(0.5);
  const auto pi = transient_distribution(d, 3);
  CHECK(pi[0] == 0.125);
  CHECK(pi[1] == 0.875);
  CHECK(step(d, {1.0, 0.0}) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("bounded until on a birth-death chain matches path enumeration") {
  // 5 states, fair steps, reflecting at 0, b = {4}, t = 10.
  const auto d = chain(5, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 0.5}, {1, 2, 0.5}, {2, 1, 0.5}, {2, 3, 0.5},
                           {3, 2, 0.5}, {3, 4, 0.5}, {4, 4, 1.0}},
                       {{"top", make_set(5, {4})}});
  const auto x = prob_bounded_until(d, all_states(5), d.label("top"), 10);
  CHECK(std::fabs(x[0] - oracle::bounded_until_by_paths(d, all_states(5), d.label("top"), 10)) <= 1e-15);
  CHECK(prob_bounded_until(d, all_states(5), d.label("top"), 0) == std::vector<double>{0, 0, 0, 0, 1});
}

TEST_CASE("bounded until only passes through a-states") {
  const auto d = chain(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 2, 1.0}});
  const auto a = make_set(3, {0});
  const auto b = make_set(3, {2});
  CHECK(prob_bounded_until(d, a, b, 5)[0] == 0.0);
  CHECK(prob_until(d, a, b)[0] == 0.0);
  CHECK(prob_until(d, all_states(3), make_set(3, {0}))[0] == 1.0);
}

TEST_CASE("cumulative transition reward sums a geometric series") {
  const auto d = chain(2, {{0, 1, 0.5}, {0, 0, 0.5}, {1, 1, 1.0}});
  RewardStructure r = RewardStructure::zero(d);
  r.transition_rewards = SparseMatrix::from_triplets(2, 2, {{0, 1, 5.0}});
  CHECK(reward_cumulative(d, r, 10) == doctest::Approx(5.0 * (1 - std::pow(0.5, 10))).epsilon(1e-14));
  r.state_rewards = {1.0, 1.0};
  r.transition_rewards = SparseMatrix(2, 2);
  CHECK(reward_cumulative(d, r, 17) == 17.0);
}

TEST_CASE("alternating chain parity") {
  const auto d = chain(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  RewardStructure r = RewardStructure::zero(d);
  r.state_rewards = {0.0, 1.0};
  CHECK(reward_instantaneous(d, r, 3) == 1.0);
  CHECK(reward_instantaneous(d, r, 4) == 0.0);
}

TEST_CASE("steady state of small rings matches power iteration") {
  const auto ring = chain(3, {{0, 1, 0.7}, {0, 0, 0.3}, {1, 2, 0.2}, {1, 1, 0.8}, {2, 0, 0.9}, {2, 2, 0.1}});
  const auto pi = steady_state_distribution(ring);
  const auto ref = oracle::limit_distribution(ring);
  for (std::size_t s = 0; s < 3; ++s) CHECK(std::fabs(pi[s] - ref[s]) <= 1e-6);
  const auto half = chain(2, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 0.5}, {1, 1, 0.5}});
  RewardStructure r = RewardStructure::zero(half);
  r.state_rewards = {0.0, 1.0};
  CHECK(reward_steady_state(half, r) == doctest::Approx(0.5).epsilon(1e-9));
  const auto absorbing = chain(1, {{0, 0, 1.0}});
  RewardStructure c = RewardStructure::zero(absorbing);
  c.state_rewards = {4.0};
  CHECK(reward_steady_state(absorbing, c) == 4.0);
}

TEST_CASE("transient distributions stay stochastic on large random chains") {
  for (std::uint64_t seed : {1, 2}) {
    const auto c = oracle::random_chain(seed, 1000);
    auto pi = transient_distribution(c.dtmc, 0);
    for (std::size_t t = 1; t <= 10000; ++t) {
      pi = step(c.dtmc, pi);
      if (t % 1000 == 0) {
        double sum = 0.0;
        for (double v : pi) sum += v;
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("bounded until increases to the unbounded value") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto c = oracle::random_chain(seed, 20);
    const auto& a = c.dtmc.label("a");
    const auto& b = c.dtmc.label("b");
    const auto limit = prob_until(c.dtmc, a, b);
    std::vector<double> prev(20, 0.0);
    for (std::size_t t : {0, 1, 2, 5, 10, 50, 200, 2000}) {
      const auto x = prob_bounded_until(c.dtmc, a, b, t);
      for (std::size_t s = 0; s < 20; ++s) {
        CHECK(x[s] >= prev[s] - 1e-15);
        CHECK(x[s] <= limit[s] + 1e-7);
      }
      prev = x;
    }
    for (std::size_t s = 0; s < 20; ++s) CHECK(std::fabs(prev[s] - limit[s]) <= 1e-6);
  }
}

TEST_CASE("cumulative reward is nondecreasing") {
  const auto c = oracle::random_chain(77, 15);
  const auto series = cumulative_series(c.dtmc, c.rewards, 200);
  for (std::size_t t = 1; t < series.size(); ++t) CHECK(series[t] >= series[t - 1]);
}
