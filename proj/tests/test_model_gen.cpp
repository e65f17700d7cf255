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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rfidqv/analysis.hpp"
#include "rfidqv/builder.hpp"
#include "rfidqv/errors.hpp"
#include "rfidqv/gc_text.hpp"
#include "rfidqv/pctl.hpp"
#include "rfidqv/rfid_explicit.hpp"
#include "rfidqv/rfid_model.hpp"
#include "support/oracle.hpp"

using namespace rfidqv;

namespace {

gc::BuiltModel build_text(const std::string& text, const gc::BuildOptions& opts = {}) {
  return gc::build(gc::parse_model(text), opts);
}

double entry(const gc::BuiltModel& m, std::size_t from, std::size_t to) {
  return oracle::dense(m.dtmc)[from][to];
}

std::size_t state_with(const gc::BuiltModel& m, const std::vector<int>& v) {
  for (std::size_t s = 0; s < m.n_states(); ++s) {
    if (m.valuation(s) == v) return s;
  }
  FAIL("valuation not reachable");
  return 0;
}

double query(const gc::BuiltModel& m, const std::string& text) {
  return std::get<double>(pctl::evaluate(m.dtmc, m.rewards, *pctl::parse(text)));
}

rfid::RfidModelConfig small(int na, int nb) {
  rfid::RfidModelConfig c;
  c.nA = na;
  c.nB = nb;
  return c;
}

std::string read_experiment(const std::string& name) {
  std::ifstream in(std::string(RFIDQV_EXPERIMENTS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("deterministic single command") {
  const auto m = build_text("module M\n var x : [0..1] init 0;\n [] x = 0 -> 1.0 : (x'=1);\nendmodule\n");
  REQUIRE(m.n_states() == 2);
  CHECK(m.valuation(0) == std::vector<int>{0});
  CHECK(entry(m, 0, 1) == 1.0);
  CHECK(entry(m, 1, 1) == 1.0);  // no enabled command
  CHECK(m.dtmc.label("init") == dtmc::make_set(2, {0}));
}

TEST_CASE("probabilistic branches") {
  const auto m =
      build_text("module M\n var x : [0..1] init 0;\n [] x = 0 -> 0.3 : (x'=1) + 0.7 : (x'=0);\nendmodule\n");
  CHECK(entry(m, 0, 1) == doctest::Approx(0.3));
  CHECK(entry(m, 0, 0) == doctest::Approx(0.7));
}

// Two modules, each with one always-enabled command that flips its own bit.
// Enumerating the product by hand: from every state each flip is taken with
// probability 1/2, so each state moves to its two neighbours with 1/2 each.
TEST_CASE("enabled commands are chosen uniformly") {
  const auto m = build_text(
      "module A\n var x : [0..1] init 0;\n [] true -> (x'=1-x);\nendmodule\n"
      "module B\n var y : [0..1] init 0;\n [] true -> (y'=1-y);\nendmodule\n");
  REQUIRE(m.n_states() == 4);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const auto s = state_with(m, {x, y});
      CHECK(entry(m, s, state_with(m, {1 - x, y})) == 0.5);
      CHECK(entry(m, s, state_with(m, {x, 1 - y})) == 0.5);
      CHECK(entry(m, s, s) == 0.0);
    }
  }
}

TEST_CASE("branches reaching the same successor are summed") {
  const auto m = build_text(
      "module M\n var x : [0..2] init 0;\n"
      " [] x = 0 -> 0.25 : (x'=1) + 0.25 : (x'=1) + 0.5 : (x'=2);\n"
      " [] x = 0 -> (x'=1);\nendmodule\n");
  const auto one = state_with(m, {1});
  const auto two = state_with(m, {2});
  CHECK(entry(m, 0, one) == doctest::Approx(0.75));
  CHECK(entry(m, 0, two) == doctest::Approx(0.25));
}

TEST_CASE("build errors") {
  SUBCASE("assignment out of range names the state and command") {
    try {
      build_text("module M\n var x : [0..2] init 0;\n [step] true -> (x'=x+1);\nendmodule\n");
      FAIL("expected ModelError");
    } catch (const ModelError& e) {
      const std::string what = e.what();
      CHECK(what.find("x") != std::string::npos);
      CHECK(what.find("step") != std::string::npos);
    }
  }
  SUBCASE("probabilities must sum to one") {
    CHECK_THROWS_AS(build_text("module M\n var x : [0..1] init 0;\n [] true -> 0.5 : (x'=1) + 0.4 : (x'=0);\nendmodule\n"),
                    ModelError);
  }
  SUBCASE("unknown name") {
    CHECK_THROWS_AS(build_text("module M\n var x : [0..1] init 0;\n [] true -> (x'=y);\nendmodule\n"), ModelError);
  }
  SUBCASE("initial value outside its range") {
    CHECK_THROWS_AS(build_text("module M\n var x : [0..1] init 2;\n [] true -> (x'=0);\nendmodule\n"), ModelError);
  }
  SUBCASE("duplicate variable across modules") {
    CHECK_THROWS_AS(build_text("module A\n var x : [0..1] init 0;\nendmodule\n"
                               "module B\n var x : [0..1] init 0;\nendmodule\n"),
                    ModelError);
  }
  SUBCASE("state cap") {
    gc::BuildOptions opts;
    opts.max_states = 10;
    CHECK_THROWS_AS(
        build_text("module M\n var x : [0..100] init 0;\n [] x < 100 -> (x'=x+1);\nendmodule\n", opts), LimitError);
    opts.max_states = 101;
    CHECK(build_text("module M\n var x : [0..100] init 0;\n [] x < 100 -> (x'=x+1);\nendmodule\n", opts).n_states() ==
          101);
  }
}

TEST_CASE("syntax errors carry a line") {
  try {
    gc::parse_model("module M\n var x : [0..1] init 0;\n [] x = 0 -> (x'=;\nendmodule\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("labels and rewards") {
  const auto m = build_text(read_experiment("two_state.gc"));
  CHECK(m.dtmc.has_label("done"));
  CHECK(query(m, "R{\"steps\"}=? [ F done ]") == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("model text round-trips") {
  std::vector<std::string> texts{read_experiment("two_state.gc"),
                                 gc::to_text(rfid::rfid_guarded_commands(small(2, 3)))};
  auto faulty = small(3, 1);
  faulty.fault_prob = 0.1;
  faulty.reauth = false;
  texts.push_back(gc::to_text(rfid::rfid_guarded_commands(faulty)));
  for (const auto& text : texts) {
    const auto once = gc::to_text(gc::parse_model(text));
    CHECK(gc::to_text(gc::parse_model(once)) == once);
    const auto a = gc::build(gc::parse_model(text));
    const auto b = gc::build(gc::parse_model(once));
    CHECK(a.dtmc == b.dtmc);
    CHECK(a.rewards == b.rewards);
  }
}

TEST_CASE("expressions print and re-parse") {
  for (const char* text : {"1 + 2 * x", "(1 + 2) * x", "-x - -y", "a & b | !c", "x < 3 ? min(x, 2) : binom(4, x, 0.5)",
                           "x - (y - z)", "x / (y * z)", "pow(2, floor(x / 2)) = ceil(mod(y, 3))"}) {
    const auto e = gc::parse_expression(text);
    CHECK(gc::equal(*gc::parse_expression(gc::to_string(*e)), *e));
  }
  const std::vector<int> vars{};
  CHECK(gc::eval(*gc::fold(gc::parse_expression("binom(4, 2, 0.5)")), vars) == doctest::Approx(0.375));
  CHECK(gc::eval(*gc::fold(gc::parse_expression("7 - 3 - 2")), vars) == 2.0);
}

TEST_CASE("two fault-free sessions cost twice one session") {
  auto cfg = small(1, 1);
  cfg.arrival_prob = 1.0;
  const auto m = rfid::build_rfid_model(cfg);
  CHECK(query(m, "P=? [ F allauth ]") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(query(m, "R{\"MD_RT\"}=? [ F allauth ]") == doctest::Approx(2 * cfg.costs.tx_session()).epsilon(1e-12));
  CHECK(query(m, "R{\"MD_RC_T\"}=? [ F allauth ]") == doctest::Approx(2 * cfg.costs.tag_session).epsilon(1e-12));
}

TEST_CASE("a single tag costs one session") {
  auto cfg = small(1, 0);
  cfg.arrival_prob = 0.3;
  const auto m = rfid::build_rfid_model(cfg);
  CHECK(query(m, "R{\"MD_RC_T\"}=? [ F allauth ]") == doctest::Approx(cfg.costs.tag_session).epsilon(1e-9));
  CHECK(query(m, "R{\"MD_RC_S\"}=? [ F allauth ]") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("expected session costs") {
  auto cfg = small(4, 4);
  auto c = rfid::expected_session_costs(cfg);
  CHECK(c.tx == 9.0);
  CHECK(c.server == 8.0);
  CHECK(c.tag == 3.0);
  cfg.fault_prob = 0.25;
  c = rfid::expected_session_costs(cfg);
  CHECK(c.tx == doctest::Approx(0.75 * 9 + 0.25 * 7));
  CHECK(c.server == doctest::Approx(0.75 * 8 + 0.25 * 16));
  CHECK(c.tag == doctest::Approx(0.75 * 3 + 0.25 * 1));
  cfg.fault_mode = rfid::FaultMode::drop_m3;
  c = rfid::expected_session_costs(cfg);
  CHECK(c.tx == 9.0);
  CHECK(c.server == 8.0);
}

TEST_CASE("every reachable state conserves each group") {
  for (const auto& [na, nb] : std::vector<std::pair<int, int>>{{1, 1}, {3, 2}, {5, 5}}) {
    auto cfg = small(na, nb);
    cfg.service_rate = 2;
    cfg.fault_prob = 0.1;
    cfg.arrival_batch = 2;
    const auto m = rfid::build_rfid_model(cfg);
    const auto ia = m.slot("idleA"), wa = m.slot("waitA"), aa = m.slot("authA"), fa = m.slot("flightA");
    const auto ib = m.slot("idleB"), wb = m.slot("waitB"), ab = m.slot("authB"), fb = m.slot("flightB");
    for (std::size_t s = 0; s < m.n_states(); ++s) {
      const auto v = m.valuation(s);
      CHECK(v[ia] + v[wa] + v[aa] + v[fa] == na);
      CHECK(v[ib] + v[wb] + v[ab] + v[fb] == nb);
      CHECK(v[fa] + v[fb] <= cfg.service_rate);
    }
    CHECK(dtmc::validate(m.dtmc).empty());
  }
}

TEST_CASE("labels of the counter model") {
  const auto cfg = small(2, 2);
  const auto m = rfid::build_rfid_model(cfg);
  const auto authed = dtmc::members(m.dtmc.label("allauth"));
  REQUIRE(authed.size() == 1);
  CHECK(m.valuation(authed[0])[m.slot("authA")] == 2);
  for (int k = 0; k <= cfg.N(); ++k) CHECK(m.dtmc.has_label("count_" + std::to_string(k)));
  CHECK(m.dtmc.label("count_0")[m.dtmc.initial()]);
}

TEST_CASE("building is deterministic") {
  auto cfg = small(4, 3);
  cfg.fault_prob = 0.05;
  const auto a = rfid::build_rfid_model(cfg);
  const auto b = rfid::build_rfid_model(cfg);
  CHECK(a.dtmc == b.dtmc);
  CHECK(a.rewards == b.rewards);
  CHECK(a.valuations == b.valuations);
}

// The per-tag chain lumps exactly onto the counter chain: for every per-tag
// state, the probability of moving into each counter class equals the
// counter chain's transition probability, and every reward agrees.
TEST_CASE("counter abstraction is an exact lumping of the per-tag chain") {
  std::vector<rfid::RfidModelConfig> configs;
  for (const auto& [na, nb] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 3}, {1, 0}}) {
    configs.push_back(small(na, nb));
  }
  auto faulty = small(2, 2);
  faulty.fault_prob = 0.2;
  faulty.service_rate = 2;
  faulty.arrival_prob = 0.4;
  configs.push_back(faulty);
  auto batched = small(3, 2);
  batched.arrival_batch = 2;
  batched.service_rate = 3;
  batched.reauth = false;
  batched.fault_mode = rfid::FaultMode::drop_m3;
  batched.fault_prob = 0.3;
  configs.push_back(batched);

  for (const auto& cfg : configs) {
    CAPTURE(rfid::to_text(cfg));
    const auto abs = rfid::build_rfid_model(cfg);
    const auto exp = rfid::build_explicit_rfid_model(cfg);
    const auto pa = oracle::dense(abs.dtmc);
    const auto pe = oracle::dense(exp.dtmc);

    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t s = 0; s < abs.n_states(); ++s) index[abs.valuation(s)] = s;
    std::vector<std::size_t> cls(exp.dtmc.n_states());
    for (std::size_t s = 0; s < cls.size(); ++s) {
      const auto it = index.find(exp.counters(s));
      REQUIRE(it != index.end());
      cls[s] = it->second;
    }
    CHECK(cls[exp.dtmc.initial()] == abs.dtmc.initial());

    for (std::size_t s = 0; s < cls.size(); ++s) {
      std::vector<double> lumped(abs.n_states(), 0.0);
      for (std::size_t u = 0; u < cls.size(); ++u) lumped[cls[u]] += pe[s][u];
      for (std::size_t c = 0; c < lumped.size(); ++c) CHECK(lumped[c] == doctest::Approx(pa[cls[s]][c]).epsilon(1e-12));
    }

    for (const auto& [name, r] : abs.rewards) {
      CAPTURE(name);
      REQUIRE(exp.rewards.count(name) == 1);
      const auto step_a = dtmc::expected_step_reward(abs.dtmc, r);
      const auto step_e = dtmc::expected_step_reward(exp.dtmc, exp.rewards.at(name));
      for (std::size_t s = 0; s < cls.size(); ++s) CHECK(step_e[s] == doctest::Approx(step_a[cls[s]]).epsilon(1e-12));
    }
    for (const auto& [name, set] : abs.dtmc.labels()) {
      if (!exp.dtmc.has_label(name)) continue;
      for (std::size_t s = 0; s < cls.size(); ++s) CHECK(exp.dtmc.label(name)[s] == set[cls[s]]);
    }

    const auto ca = dtmc::instantaneous_series(abs.dtmc, abs.rewards.at("count"), 30);
    const auto ce = dtmc::instantaneous_series(exp.dtmc, exp.rewards.at("count"), 30);
    for (std::size_t t = 0; t < ca.size(); ++t) CHECK(ce[t] == doctest::Approx(ca[t]).epsilon(1e-12));
  }
}

TEST_CASE("per-tag model is limited to six tags") {
  CHECK_THROWS_AS(rfid::build_explicit_rfid_model(small(4, 3)), InvalidArgument);
}

TEST_CASE("config files") {
  const auto c = rfid::parse_config("# comment\nN = 5\nservice_rate = 3\nfault_mode = drop_m3\nfault_prob = 0.1\n"
                                    "reauth = false\ncost.tx_relay = 2.5\n");
  CHECK(c.nA == 3);
  CHECK(c.nB == 2);
  CHECK(c.service_rate == 3);
  CHECK(c.fault_mode == rfid::FaultMode::drop_m3);
  CHECK_FALSE(c.reauth);
  CHECK(c.costs.tx_relay == 2.5);
  const auto again = rfid::parse_config(rfid::to_text(c));
  CHECK(rfid::to_text(again) == rfid::to_text(c));

  CHECK(rfid::parse_config("nA = 1\nnB = 0\n").N() == 1);
  CHECK_THROWS_AS(rfid::parse_config("speed = 3\n"), Error);
  CHECK_THROWS_AS(rfid::parse_config("nA = 51\n"), Error);
  CHECK_THROWS_AS(rfid::parse_config("arrival_prob = 0\n"), Error);
  CHECK_THROWS_AS(rfid::parse_config("fault_mode = sometimes\n"), Error);
  CHECK_THROWS_AS(rfid::parse_config("nA\n"), Error);

  const auto w = rfid::with_population(rfid::RfidModelConfig{}, 7);
  CHECK(w.nA == 4);
  CHECK(w.nB == 3);
  CHECK(rfid::load_config(std::string(RFIDQV_EXPERIMENTS_DIR) + "/default.cfg").N() == 10);
}

TEST_CASE("fault-free populations saturate") {
  const auto cfg = small(5, 5);
  const auto m = rfid::build_rfid_model(cfg);
  const auto series = dtmc::instantaneous_series(m.dtmc, m.rewards.at("count"), 2000);
  for (std::size_t t = 1; t < series.size(); ++t) CHECK(series[t] >= series[t - 1] - 1e-12);
  CHECK(series.back() >= 0.99 * cfg.N());
  CHECK(series.back() <= cfg.N() + 1e-9);
}
