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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rfidqv/csv.hpp"
#include "rfidqv/dtmc_io.hpp"
#include "rfidqv/errors.hpp"
#include "rfidqv/experiments.hpp"
#include "rfidqv/gc_text.hpp"
#include "rfidqv/pctl.hpp"
#include "rfidqv/protocol.hpp"
#include "rfidqv/protocol_sim.hpp"
#include "rfidqv/rfid_model.hpp"
#include "rfidqv/simulate.hpp"

namespace rfidqv::cli {

namespace {

namespace fs = std::filesystem;

// Bad input of any kind: maps to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path.string());
}

fs::path output_dir(const std::string& dir) {
  const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw InputError("cannot create output directory " + p.string());
  return p;
}

bool is_config(const fs::path& p) { return p.extension() == ".cfg"; }

rfid::RfidModelConfig load_rfid_config(const std::string& path) {
  if (path.empty()) return {};
  try {
    return rfid::parse_config(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct LoadedModel {
  dtmc::Dtmc dtmc;
  dtmc::RewardModels rewards;
};

// .cfg is an RFID deployment, .dtmc an explicit chain, anything else a
// guarded-command model.
LoadedModel load_model(const std::string& path) {
  const fs::path p(path);
  if (is_config(p)) {
    auto m = rfid::build_rfid_model(load_rfid_config(path));
    return {std::move(m.dtmc), std::move(m.rewards)};
  }
  const std::string text = read_file(p);
  try {
    if (p.extension() == ".dtmc") {
      auto f = dtmc::parse_dtmc(text);
      LoadedModel out{std::move(f.dtmc), {}};
      if (f.rewards) out.rewards.emplace("default", std::move(*f.rewards));
      return out;
    }
    auto m = gc::build(gc::parse_model(text));
    return {std::move(m.dtmc), std::move(m.rewards)};
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const ModelError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<pctl::Property> load_properties(const std::string& path) {
  try {
    return pctl::parse_property_file(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

// --- check ---------------------------------------------------------------

struct CheckArgs {
  std::string model, props, reward, out;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
  const LoadedModel m = load_model(a.model);
  const auto props = load_properties(a.props);
  pctl::EvalOptions opts;
  if (!a.reward.empty()) {
    if (!m.rewards.count(a.reward)) throw InputError(a.model + ": no reward structure \"" + a.reward + "\"");
    opts.default_reward = a.reward;
  }
  out << a.model << ": " << m.dtmc.n_states() << " states, " << m.dtmc.transitions().nnz() << " transitions\n";

  // Wall time goes to the console only, so results.csv stays byte-stable.
  csv::Table table({"index", "line", "property", "value"});
  bool all_hold = true;
  for (std::size_t i = 0; i < props.size(); ++i) {
    const auto& p = props[i];
    const auto start = std::chrono::steady_clock::now();
    pctl::Value v;
    try {
      v = pctl::evaluate(m.dtmc, m.rewards, *p.formula, opts);
    } catch (const InvalidArgument& e) {
      throw InputError(a.props + ":" + std::to_string(p.line) + ": " + e.what());
    } catch (const UnsupportedStructure& e) {
      throw UnsupportedStructure(a.props + ":" + std::to_string(p.line) + ": " + e.what(), e.components());
    } catch (const NumericalError& e) {
      throw NumericalError(a.props + ":" + std::to_string(p.line) + ": " + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string value;
    if (const auto* d = std::get_if<double>(&v)) {
      value = csv::number(*d);
    } else {
      const bool holds = std::holds_alternative<bool>(v) ? std::get<bool>(v)
                                                          : std::get<dtmc::StateSet>(v)[m.dtmc.initial()];
      value = holds ? "true" : "false";
      all_hold = all_hold && holds;
    }
    out << "[" << i + 1 << "] " << p.text << " = " << value << "  (" << seconds(elapsed) << ")\n";
    table.add_row({std::to_string(i + 1), std::to_string(p.line), p.text, value});
  }
  if (!a.out.empty()) {
    const fs::path file = output_dir(a.out) / "results.csv";
    table.write(file);
    out << "wrote " << file.string() << "\n";
  }
  return all_hold ? kOk : kFailure;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string model, sweep = "10:100:10", out = ".";
  std::size_t horizon = 2500;
  std::uint64_t seed = 1;
};

void parse_range(const std::string& s, experiments::SweepSpec& spec) {
  int a = 0, b = 0, c = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d:%d:%d%c", &a, &b, &c, &tail) != 3) {
    throw InputError("--sweep expects start:stop:step, got '" + s + "'");
  }
  spec.start = a;
  spec.stop = b;
  spec.step = c;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  experiments::SweepSpec spec;
  spec.base = load_rfid_config(a.model);
  parse_range(a.sweep, spec);
  spec.horizon = a.horizon;
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  const auto dir = output_dir(a.out);
  const auto start = std::chrono::steady_clock::now();
  const auto result = experiments::run_sweep(spec);
  result.fig2.write(dir / "fig2.csv");
  result.fig3.write(dir / "fig3.csv");
  result.fig4.write(dir / "fig4.csv");
  result.fig5.write(dir / "fig5.csv");
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "computation to authenticate all tags:\n" << result.fig4.str();
  out << "service:\n" << result.fig5.str();
  out << "wrote fig2.csv fig3.csv fig4.csv fig5.csv to " << dir.string() << " (" << seconds(elapsed) << ")\n";
  return kOk;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string model, props, out = ".";
  std::size_t horizon = 500;
  std::size_t runs = 0;  // 0: per-mode default
  std::uint64_t seed = 1;
};

constexpr double kSigma = 3.0;

struct ComparisonRows {
  csv::Table table{{"quantity", "t", "analytic", "estimate", "std_error", "runs", "result"}};
  bool failed = false;
  bool low_confidence = false;

  void add(const std::string& quantity, const std::string& t, double analytic, const sim::SimReport& r,
           std::ostream& out) {
    const auto c = sim::compare(analytic, r, kSigma);
    std::string result = c.pass ? "pass" : "fail";
    if (r.unreliable()) result += ";unreliable";
    if (r.low_confidence()) result += ";low_confidence";
    failed = failed || !c.pass || r.unreliable();
    low_confidence = low_confidence || r.low_confidence();
    table.add_row({quantity, t, csv::number(analytic), csv::number(r.estimate), csv::number(r.std_error),
                   std::to_string(r.runs), result});
    out << quantity << (t.empty() ? "" : "(t=" + t + ")") << " " << c.report << "\n";
  }

  int exit_code() const {
    if (low_confidence) return kOk;  // comparisons are indicative only
    return failed ? kFailure : kOk;
  }
};

// A sample with no spread says little about events rarer than 1/runs. By the
// rule of three such events have probability below 3/runs, so a zero standard
// error is replaced by range/runs, which the 3-sigma gate turns into 3*range/runs.
sim::SimReport report(double mean, double std_error, double range, std::size_t runs, std::uint64_t seed) {
  if (std_error == 0.0) std_error = range / static_cast<double>(runs);
  return {mean, std_error, runs, seed, 0};
}

int simulate_protocol(const SimulateArgs& a, std::ostream& out) {
  const auto cfg = load_rfid_config(a.model);
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  if (a.horizon < 1) throw InputError("--horizon must be at least 1");
  const std::size_t runs = a.runs ? a.runs : 200;
  protocol::ProtocolConfig pcfg;
  pcfg.l = static_cast<std::size_t>(cfg.l);
  const auto dir = output_dir(a.out);

  const auto series = sim::simulate_protocol(cfg, pcfg, a.horizon, runs, a.seed);
  write_file(dir / "series.csv", sim::series_csv(series));
  write_file(dir / "delays.csv", sim::delays_csv(series));

  const auto model = rfid::build_rfid_model(cfg);
  const auto authenticated = dtmc::instantaneous_series(model.dtmc, model.rewards.at(rfid::kAuthenticated), a.horizon);
  const auto in_service = dtmc::instantaneous_series(model.dtmc, model.rewards.at(rfid::kInService), a.horizon);
  const auto cum_tx = dtmc::cumulative_series(model.dtmc, model.rewards.at(rfid::kTransmission), a.horizon);

  const double n = cfg.N();
  const auto& c = cfg.costs;
  const double tx_per_step =
      cfg.service_rate * std::max(c.tx_session(), c.tx_challenge + c.tx_response + c.tx_forward + c.tx_error);
  ComparisonRows rows;
  for (int k = 1; k <= 5; ++k) {
    const std::size_t t = std::max<std::size_t>(1, a.horizon * static_cast<std::size_t>(k) / 5);
    const std::string ts = std::to_string(t);
    rows.add("authenticated", ts, authenticated[t],
             report(series.authenticated.mean[t], series.authenticated.std_error[t], n, runs, a.seed), out);
    rows.add("in_service", ts, in_service[t],
             report(series.in_service.mean[t], series.in_service.std_error[t], n, runs, a.seed), out);
    rows.add("cum_tx", ts, cum_tx[t],
             report(series.cum_tx.mean[t], series.cum_tx.std_error[t], tx_per_step * static_cast<double>(t), runs,
                    a.seed),
             out);
  }
  if (series.incomplete == 0) {
    const auto sp = experiments::service_metrics(model, cfg.N());
    rows.add("mean_delay", "", sp.mean_delay,
             report(series.mean_delay, series.mean_delay_std_error, static_cast<double>(a.horizon), runs, a.seed),
             out);
  } else {
    out << "mean_delay not compared: " << series.incomplete << " tag(s) unauthenticated at the horizon\n";
  }
  rows.table.write(dir / "comparison.csv");
  out << "throughput over the second half: " << csv::number(series.throughput(a.horizon / 2, a.horizon))
      << " sessions/step\n";
  if (rows.low_confidence) out << "warning: fewer than 30 runs; estimates are low-confidence\n";
  out << "wrote series.csv delays.csv comparison.csv to " << dir.string() << "\n";
  return rows.exit_code();
}

int simulate_chain(const SimulateArgs& a, std::ostream& out) {
  if (a.props.empty()) throw InputError("simulate: --props is required for non-.cfg models");
  const LoadedModel m = load_model(a.model);
  const auto props = load_properties(a.props);
  sim::SimOptions opts;
  opts.seed = a.seed;
  if (a.runs) opts.runs = a.runs;
  const auto dir = output_dir(a.out);

  ComparisonRows rows;
  for (const auto& p : props) {
    const std::string where = a.props + ":" + std::to_string(p.line);
    double analytic = 0.0;
    sim::SimReport report;
    try {
      const auto v = pctl::evaluate(m.dtmc, m.rewards, *p.formula, opts.eval);
      if (!std::holds_alternative<double>(v)) throw InvalidArgument("only =? queries can be simulated");
      analytic = std::get<double>(v);
      report = sim::simulate_dtmc(m.dtmc, m.rewards, *p.formula, opts);
    } catch (const InvalidArgument& e) {
      throw InputError(where + ": " + e.what());
    }
    rows.add(p.text, "", analytic, report, out);
  }
  rows.table.write(dir / "comparison.csv");
  if (rows.low_confidence) out << "warning: fewer than 30 runs; estimates are low-confidence\n";
  out << "wrote comparison.csv to " << dir.string() << "\n";
  return rows.exit_code();
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.model.empty() || is_config(a.model)) return simulate_protocol(a, out);
  return simulate_chain(a, out);
}

// --- demo ----------------------------------------------------------------

struct DemoArgs {
  std::size_t l = 128;
  std::string fault = "none";
  std::uint64_t seed = 1;
  bool retry = false;
  std::string out;
};

protocol::Fault parse_fault(const std::string& s) {
  if (s == "none") return protocol::Fault::none();
  if (s == "drop_m3") return protocol::Fault::drop_m3();
  if (s.rfind("corrupt:", 0) == 0) {
    const std::string step = s.substr(8);
    if (step == "1" || step == "2" || step == "5") return protocol::Fault::corrupt(std::stoi(step));
  }
  throw InputError("--fault expects none, drop_m3 or corrupt:<1|2|5>, got '" + s + "'");
}

const char* direction(const std::string& type) {
  if (type == "challenge" || type == "reader_relay") return "reader -> tag";
  if (type == "tag_response") return "tag -> reader";
  if (type == "reader_forward") return "reader -> server";
  if (type == "server_reply" || type == "server_error") return "server -> reader";
  return "tag (local)";
}

int cmd_demo(const DemoArgs& a, std::ostream& out) {
  protocol::ProtocolConfig cfg;
  cfg.l = a.l;
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  const auto fault = parse_fault(a.fault);
  Rng rng(a.seed);
  const BitString u = BitString::random(cfg.l, rng);
  protocol::TagState tag = protocol::make_tag(cfg, u);
  std::vector<protocol::ServerRecord> db{protocol::make_record(cfg, u, {0xD0})};
  out << "tag secret u = " << u.to_hex() << "\n";

  csv::Table table({"session", "step", "direction", "type", "payload"});
  bool mutual = false;
  const int sessions = a.retry ? 2 : 1;
  for (int s = 1; s <= sessions; ++s) {
    const auto f = s == 1 ? fault : protocol::Fault::none();
    const auto tr = protocol::run_session(cfg, tag, db, rng, f);
    out << "session " << s << " (l=" << cfg.l << ", fault=" << (s == 1 ? a.fault : "none") << ")\n";
    for (const auto& e : tr.entries) {
      const std::string type = protocol::message_type(e.message);
      const std::string payload = protocol::message_payload(e.message);
      out << "  " << e.step << "  " << direction(type) << "  " << type << "  " << payload << "\n";
      table.add_row({std::to_string(s), std::to_string(e.step), direction(type), type, payload});
    }
    if (tr.server_accepted) {
      out << "  server: accepted (" << (tr.matched == protocol::MatchedPair::old_pair ? "old" : "new")
          << " pair, " << tr.probes << " probe(s))\n";
    } else {
      out << "  server: rejected after " << tr.probes << " probe(s)\n";
    }
    const bool verdict = std::any_of(tr.entries.begin(), tr.entries.end(), [](const auto& e) {
      return std::holds_alternative<protocol::TagVerdict>(e.message);
    });
    out << "  tag: " << (tr.tag_accepted ? "accepted" : verdict ? "rejected" : "no verdict (M3 not received)")
        << "\n";
    mutual = tr.mutual();
    out << "  mutual authentication: " << (mutual ? "yes" : "no") << "\n";
  }
  if (!a.out.empty()) table.write(output_dir(a.out) / "transcript.csv");
  return mutual ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic verification toolkit for the Song-Mitchell RFID protocol", "rfidqv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rfidqv 0.1.0");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Evaluate PCTL and reward properties on a model");
  c->add_option("--model", check.model, "Model: .cfg (RFID deployment), .dtmc (explicit) or guarded commands")
      ->required();
  c->add_option("--props", check.props, "Property file, one query per line")->required();
  c->add_option("--reward", check.reward, "Reward structure for R queries that do not name one");
  c->add_option("--out", check.out, "Directory for results.csv");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Sweep the tag population and write fig2..fig5.csv");
  w->add_option("--model", sweep.model, "Base RFID configuration (.cfg); N is overridden");
  w->add_option("--sweep", sweep.sweep, "Populations start:stop:step")->capture_default_str();
  w->add_option("--horizon", sweep.horizon, "Time steps in the series")->capture_default_str();
  w->add_option("--seed", sweep.seed, "Accepted for uniformity; the sweep is analytic");
  w->add_option("--out", sweep.out, "Output directory")->capture_default_str();

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Monte Carlo runs compared against analytic values");
  s->add_option("--model", simulate.model, "RFID configuration (.cfg, default built-in) or a chain model");
  s->add_option("--props", simulate.props, "Queries to simulate (chain models)");
  s->add_option("--horizon", simulate.horizon, "Time steps (RFID)")->capture_default_str();
  s->add_option("--runs", simulate.runs, "Runs (default 200 for RFID, 100000 for chains)");
  s->add_option("--seed", simulate.seed, "Generator seed")->capture_default_str();
  s->add_option("--out", simulate.out, "Output directory")->capture_default_str();

  DemoArgs demo;
  auto* d = app.add_subcommand("demo", "Print the transcript of one protocol session");
  d->add_option("--l", demo.l, "Identifier length in bits, divisible by 4")->capture_default_str();
  d->add_option("--fault", demo.fault, "none | drop_m3 | corrupt:<1|2|5>")->capture_default_str();
  d->add_option("--seed", demo.seed, "Generator seed")->capture_default_str();
  d->add_flag("--retry", demo.retry, "Run a fault-free second session afterwards");
  d->add_option("--out", demo.out, "Directory for transcript.csv");

  std::vector<std::string> argv(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (c->parsed()) return cmd_check(check, out);
    if (w->parsed()) return cmd_sweep(sweep, out);
    if (s->parsed()) return cmd_simulate(simulate, out);
    return cmd_demo(demo, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // Numerical failures, exceeded limits, unsupported chain structure.
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace rfidqv::cli
