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

#include "rfidqv/dtmc_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

#include "rfidqv/errors.hpp"

namespace rfidqv::dtmc {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a state index, got '" + tok + "'", line, 1);
  }
  return v;
}

double parse_real(const std::string& tok, std::size_t line) {
  // strtod rather than from_chars<double>, which libstdc++ 11 lacks.
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size()) {
    throw ParseError("expected a real number, got '" + tok + "'", line, 1);
  }
  return v;
}

}  // namespace

void write_dtmc(std::ostream& out, const Dtmc& d, const RewardStructure* rewards) {
  out << "dtmc " << d.n_states() << ' ' << d.initial() << '\n';
  const auto& p = d.transitions();
  for (std::size_t s = 0; s < p.rows(); ++s) {
    for (const auto& e : p.row(s)) out << s << ' ' << e.column << ' ' << format_real(e.value) << '\n';
  }
  for (const auto& [name, set] : d.labels()) {
    out << "label " << name;
    for (std::size_t s = 0; s < set.size(); ++s) {
      if (set[s]) out << ' ' << s;
    }
    out << '\n';
  }
  if (rewards == nullptr) return;
  for (std::size_t s = 0; s < rewards->state_rewards.size(); ++s) {
    if (rewards->state_rewards[s] != 0.0) out << "srew " << s << ' ' << format_real(rewards->state_rewards[s]) << '\n';
  }
  const auto& iota = rewards->transition_rewards;
  for (std::size_t s = 0; s < iota.rows(); ++s) {
    for (const auto& e : iota.row(s)) {
      if (e.value != 0.0) out << "trew " << s << ' ' << e.column << ' ' << format_real(e.value) << '\n';
    }
  }
}

std::string to_text(const Dtmc& d, const RewardStructure* rewards) {
  std::ostringstream out;
  write_dtmc(out, d, rewards);
  return out.str();
}

DtmcFile read_dtmc(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::size_t initial = 0;
  std::vector<Triplet> transitions;
  std::vector<Triplet> trew;
  std::vector<std::pair<std::size_t, double>> srew;
  std::map<std::string, StateSet> labels;

  const auto check_state = [&](std::size_t s, std::size_t line) {
    if (s >= n) throw ParseError("state " + std::to_string(s) + " out of range", line, 1);
  };

  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    const auto tok = split(text);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 3 || tok[0] != "dtmc") {
        throw ParseError("expected header 'dtmc <n_states> <initial>'", line_no, 1, {"dtmc"});
      }
      n = parse_index(tok[1], line_no);
      initial = parse_index(tok[2], line_no);
      if (n == 0) throw ParseError("chain must have at least one state", line_no, 1);
      check_state(initial, line_no);
      have_header = true;
      continue;
    }
    if (tok[0] == "label") {
      if (tok.size() < 2) throw ParseError("label needs a name", line_no, 1);
      StateSet set(n, false);
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto s = parse_index(tok[i], line_no);
        check_state(s, line_no);
        set[s] = true;
      }
      if (!labels.emplace(tok[1], std::move(set)).second) {
        throw ParseError("duplicate label '" + tok[1] + "'", line_no, 1);
      }
    } else if (tok[0] == "srew") {
      if (tok.size() != 3) throw ParseError("expected 'srew <state> <value>'", line_no, 1);
      const auto s = parse_index(tok[1], line_no);
      check_state(s, line_no);
      srew.emplace_back(s, parse_real(tok[2], line_no));
    } else if (tok[0] == "trew") {
      if (tok.size() != 4) throw ParseError("expected 'trew <from> <to> <value>'", line_no, 1);
      const auto from = parse_index(tok[1], line_no);
      const auto to = parse_index(tok[2], line_no);
      check_state(from, line_no);
      check_state(to, line_no);
      trew.push_back({from, to, parse_real(tok[3], line_no)});
    } else {
      if (tok.size() != 3) throw ParseError("expected '<from> <to> <prob>'", line_no, 1, {"label", "srew", "trew"});
      const auto from = parse_index(tok[0], line_no);
      const auto to = parse_index(tok[1], line_no);
      check_state(from, line_no);
      check_state(to, line_no);
      transitions.push_back({from, to, parse_real(tok[2], line_no)});
    }
  }
  if (!have_header) throw ParseError("empty chain file", line_no + 1, 1, {"dtmc"});

  DtmcFile out{Dtmc(n, initial, SparseMatrix::from_triplets(n, n, std::move(transitions)), std::move(labels)),
               std::nullopt};
  if (!srew.empty() || !trew.empty()) {
    RewardStructure r{std::vector<double>(n, 0.0), SparseMatrix::from_triplets(n, n, std::move(trew))};
    for (const auto& [s, v] : srew) r.state_rewards[s] += v;
    out.rewards = std::move(r);
  }
  return out;
}

DtmcFile parse_dtmc(const std::string& text) {
  std::istringstream in(text);
  return read_dtmc(in);
}

}  // namespace rfidqv::dtmc
