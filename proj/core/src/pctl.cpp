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

#include "rfidqv/pctl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "rfidqv/errors.hpp"

namespace rfidqv::pctl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const std::set<std::string, std::less<>> kKeywords = {"true", "X", "U", "F", "P", "R", "I", "C", "S"};

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- lexer

enum class Tok { ident, number, string, amp, bang, lparen, rparen, lbrack, rbrack, lbrace, rbrace, eq, question,
                 lt, le, gt, ge, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

std::string describe(Tok k) {
  switch (k) {
    case Tok::ident: return "identifier";
    case Tok::number: return "number";
    case Tok::string: return "string";
    case Tok::amp: return "'&'";
    case Tok::bang: return "'!'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrack: return "'['";
    case Tok::rbrack: return "']'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::eq: return "'='";
    case Tok::question: return "'?'";
    case Tok::lt: return "'<'";
    case Tok::le: return "'<='";
    case Tok::gt: return "'>'";
    case Tok::ge: return "'>='";
    case Tok::end: return "end of input";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto col = [&](std::size_t pos) { return pos + 1; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), col(start)});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      out.push_back({Tok::number, std::string(s.substr(start, i - start)), col(start)});
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < s.size() && s[i] != '"') ++i;
      if (i >= s.size()) throw ParseError("unterminated string", 1, col(start));
      out.push_back({Tok::string, std::string(s.substr(start + 1, i - start - 1)), col(start)});
      ++i;
      continue;
    }
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '&': kind = Tok::amp; break;
      case '!': kind = Tok::bang; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case '[': kind = Tok::lbrack; break;
      case ']': kind = Tok::rbrack; break;
      case '{': kind = Tok::lbrace; break;
      case '}': kind = Tok::rbrace; break;
      case '=': kind = Tok::eq; break;
      case '?': kind = Tok::question; break;
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          kind = Tok::le;
          len = 2;
        } else {
          kind = Tok::lt;
        }
        break;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          kind = Tok::ge;
          len = 2;
        } else {
          kind = Tok::gt;
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", 1, col(start));
    }
    out.push_back({kind, std::string(s.substr(start, len)), col(start)});
    i += len;
  }
  out.push_back({Tok::end, "", col(s.size())});
  return out;
}

// --------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  FormulaPtr parse_top() {
    FormulaPtr f = state();
    if (peek().kind != Tok::end) fail("unexpected " + describe(peek().kind), {"'&'", "end of input"});
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool peek_keyword(std::string_view kw) const { return peek().kind == Tok::ident && peek().text == kw; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
    throw ParseError(msg, 1, peek().column, std::move(expected));
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail("unexpected " + describe(peek().kind), {describe(kind)});
    return advance();
  }

  FormulaPtr state() {
    FormulaPtr lhs = unary();
    while (peek().kind == Tok::amp) {
      advance();
      lhs = make_and(lhs, unary());
    }
    return lhs;
  }

  FormulaPtr unary() {
    if (peek().kind == Tok::bang) {
      advance();
      return make_not(unary());
    }
    return primary();
  }

  FormulaPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::lparen: {
        advance();
        FormulaPtr f = state();
        expect(Tok::rparen);
        return f;
      }
      case Tok::string:
        advance();
        return make_atom(t.text);
      case Tok::ident:
        if (t.text == "true") {
          advance();
          return make_true();
        }
        if (t.text == "P") return prob_query();
        if (t.text == "R") return reward_query();
        if (kKeywords.count(t.text)) fail("keyword '" + t.text + "' cannot be used as a proposition");
        advance();
        return make_atom(t.text);
      default:
        fail("unexpected " + describe(t.kind), {"'true'", "identifier", "'!'", "'('", "'P'", "'R'"});
    }
  }

  Bound bound(bool probability) {
    if (peek().kind == Tok::eq) {
      advance();
      expect(Tok::question);
      return Bound::query();
    }
    Comparison op;
    switch (peek().kind) {
      case Tok::lt: op = Comparison::less; break;
      case Tok::le: op = Comparison::less_equal; break;
      case Tok::gt: op = Comparison::greater; break;
      case Tok::ge: op = Comparison::greater_equal; break;
      default:
        fail("unexpected " + describe(peek().kind), {"'=?'", "'<'", "'<='", "'>'", "'>='"});
    }
    advance();
    const Token& num = peek();
    if (num.kind != Tok::number) fail("unexpected " + describe(num.kind), {"number"});
    const double v = std::strtod(num.text.c_str(), nullptr);
    if (probability && !(v >= 0.0 && v <= 1.0)) fail("probability threshold " + num.text + " outside [0,1]");
    if (!probability && !(v >= 0.0)) fail("reward threshold " + num.text + " is negative");
    advance();
    return Bound{op, v};
  }

  std::size_t time_bound() {
    const Token& num = peek();
    if (num.kind != Tok::number) fail("unexpected " + describe(num.kind), {"integer"});
    for (char c : num.text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail("time bound must be a non-negative integer");
    }
    advance();
    return std::stoull(num.text);
  }

  FormulaPtr prob_query() {
    advance();  // P
    Bound b = bound(true);
    expect(Tok::lbrack);
    PathFormula path;
    if (peek_keyword("X")) {
      advance();
      path = Next{state()};
    } else if (peek_keyword("F")) {
      advance();
      if (peek().kind == Tok::le) {
        advance();
        const std::size_t t = time_bound();
        path = BoundedUntil{make_true(), state(), t};
      } else {
        path = Until{make_true(), state()};
      }
    } else {
      FormulaPtr lhs = state();
      if (!peek_keyword("U")) fail("unexpected " + describe(peek().kind), {"'U'"});
      advance();
      if (peek().kind == Tok::le) {
        advance();
        const std::size_t t = time_bound();
        path = BoundedUntil{lhs, state(), t};
      } else {
        path = Until{lhs, state()};
      }
      if (peek_keyword("U")) fail("'U' does not associate; add parentheses");
    }
    expect(Tok::rbrack);
    return make_prob(b, std::move(path));
  }

  FormulaPtr reward_query() {
    advance();  // R
    std::optional<std::string> name;
    if (peek().kind == Tok::lbrace) {
      advance();
      name = expect(Tok::string).text;
      expect(Tok::rbrace);
    }
    Bound b = bound(false);
    expect(Tok::lbrack);
    RewardForm form;
    if (peek_keyword("I")) {
      advance();
      expect(Tok::eq);
      form = Instantaneous{time_bound()};
    } else if (peek_keyword("C")) {
      advance();
      expect(Tok::le);
      form = Cumulative{time_bound()};
    } else if (peek_keyword("F")) {
      advance();
      form = Reachability{state()};
    } else if (peek_keyword("S")) {
      advance();
      form = SteadyState{};
    } else {
      fail("unexpected " + describe(peek().kind), {"'I'", "'C'", "'F'", "'S'"});
    }
    expect(Tok::rbrack);
    return make_reward(std::move(name), b, std::move(form));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// -------------------------------------------------------------- printer

std::string bound_string(const Bound& b) {
  if (b.is_query()) return "=?";
  const char* op = "";
  switch (*b.op) {
    case Comparison::less: op = "<"; break;
    case Comparison::less_equal: op = "<="; break;
    case Comparison::greater: op = ">"; break;
    case Comparison::greater_equal: op = ">="; break;
  }
  return op + format_real(b.threshold);
}

bool equal_ptr(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

// ------------------------------------------------------------ evaluator

class Evaluator {
 public:
  Evaluator(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const EvalOptions& opts)
      : d_(d), rewards_(rewards), opts_(opts) {}

  dtmc::StateSet sat(const Formula& f) const {
    const std::size_t n = d_.n_states();
    return std::visit(
        Overloaded{
            [&](const True&) { return dtmc::all_states(n); },
            [&](const Atom& a) { return d_.label(a.name); },
            [&](const And& a) {
              auto l = sat(*a.lhs);
              const auto r = sat(*a.rhs);
              for (std::size_t s = 0; s < n; ++s) l[s] = l[s] && r[s];
              return l;
            },
            [&](const Not& x) {
              auto v = sat(*x.operand);
              v.flip();
              return v;
            },
            [&](const ProbQuery& q) {
              if (q.bound.is_query()) throw InvalidArgument("'P=?' is only allowed as the outermost operator");
              return threshold(path(q), q.bound);
            },
            [&](const RewardQuery& q) {
              if (q.bound.is_query()) throw InvalidArgument("'R=?' is only allowed as the outermost operator");
              return threshold(reward_states(q), q.bound);
            },
        },
        f.node);
  }

  std::vector<double> path(const ProbQuery& q) const {
    return std::visit(Overloaded{
                          [&](const Next& x) { return dtmc::prob_next(d_, sat(*x.operand)); },
                          [&](const BoundedUntil& u) {
                            return dtmc::prob_bounded_until(d_, sat(*u.lhs), sat(*u.rhs), u.bound);
                          },
                          [&](const Until& u) { return dtmc::prob_until(d_, sat(*u.lhs), sat(*u.rhs), opts_.solver); },
                      },
                      q.path);
  }

  /// Backward (per-state) evaluation, used for nested reward bounds.
  std::vector<double> reward_states(const RewardQuery& q) const {
    const auto& r = select_reward(rewards_, q, opts_);
    const std::size_t n = d_.n_states();
    const auto& p = d_.transitions();
    const auto back = [&](const std::vector<double>& v) {
      std::vector<double> out(n, 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        for (const auto& e : p.row(s)) out[s] += e.value * v[e.column];
      }
      return out;
    };
    return std::visit(Overloaded{
                          [&](const Instantaneous& i) {
                            std::vector<double> v = r.state_rewards;
                            for (std::size_t k = 0; k < i.t; ++k) v = back(v);
                            return v;
                          },
                          [&](const Cumulative& c) {
                            const auto step_reward = dtmc::expected_step_reward(d_, r);
                            std::vector<double> v(n, 0.0);
                            for (std::size_t k = 0; k < c.t; ++k) {
                              v = back(v);
                              for (std::size_t s = 0; s < n; ++s) v[s] += step_reward[s];
                            }
                            return v;
                          },
                          [&](const Reachability& f) {
                            return dtmc::reward_reachability_states(d_, r, sat(*f.target), opts_.solver);
                          },
                          [&](const SteadyState&) {
                            return std::vector<double>(n, dtmc::reward_steady_state(d_, r, opts_.solver));
                          },
                      },
                      q.form);
  }

  double reward_initial(const RewardQuery& q) const {
    const auto& r = select_reward(rewards_, q, opts_);
    return std::visit(Overloaded{
                          [&](const Instantaneous& i) { return dtmc::reward_instantaneous(d_, r, i.t); },
                          [&](const Cumulative& c) { return dtmc::reward_cumulative(d_, r, c.t); },
                          [&](const Reachability& f) {
                            return dtmc::reward_reachability(d_, r, sat(*f.target), opts_.solver);
                          },
                          [&](const SteadyState&) { return dtmc::reward_steady_state(d_, r, opts_.solver); },
                      },
                      q.form);
  }

 private:
  static dtmc::StateSet threshold(const std::vector<double>& values, const Bound& b) {
    dtmc::StateSet out(values.size());
    for (std::size_t s = 0; s < values.size(); ++s) out[s] = compare(values[s], b);
    return out;
  }

  const dtmc::Dtmc& d_;
  const dtmc::RewardModels& rewards_;
  const EvalOptions& opts_;
};

}  // namespace

bool compare(double value, const Bound& bound) {
  if (bound.is_query()) throw InvalidArgument("compare: '=?' bound has no threshold");
  switch (*bound.op) {
    case Comparison::less: return value < bound.threshold;
    case Comparison::less_equal: return value <= bound.threshold;
    case Comparison::greater: return value > bound.threshold;
    case Comparison::greater_equal: return value >= bound.threshold;
  }
  return false;
}

FormulaPtr make_true() { return std::make_shared<const Formula>(Formula{True{}}); }
FormulaPtr make_atom(std::string name) { return std::make_shared<const Formula>(Formula{Atom{std::move(name)}}); }
FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(Formula{And{std::move(lhs), std::move(rhs)}});
}
FormulaPtr make_not(FormulaPtr operand) { return std::make_shared<const Formula>(Formula{Not{std::move(operand)}}); }
FormulaPtr make_prob(Bound bound, PathFormula path) {
  return std::make_shared<const Formula>(Formula{ProbQuery{bound, std::move(path)}});
}
FormulaPtr make_reward(std::optional<std::string> reward, Bound bound, RewardForm form) {
  return std::make_shared<const Formula>(Formula{RewardQuery{std::move(reward), bound, std::move(form)}});
}

bool equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const True&) { return true; },
          [&](const Atom& x) { return x.name == std::get<Atom>(b.node).name; },
          [&](const And& x) {
            const auto& y = std::get<And>(b.node);
            return equal_ptr(x.lhs, y.lhs) && equal_ptr(x.rhs, y.rhs);
          },
          [&](const Not& x) { return equal_ptr(x.operand, std::get<Not>(b.node).operand); },
          [&](const ProbQuery& x) {
            const auto& y = std::get<ProbQuery>(b.node);
            if (!(x.bound == y.bound) || x.path.index() != y.path.index()) return false;
            return std::visit(Overloaded{
                                  [&](const Next& n) { return equal_ptr(n.operand, std::get<Next>(y.path).operand); },
                                  [&](const BoundedUntil& u) {
                                    const auto& v = std::get<BoundedUntil>(y.path);
                                    return u.bound == v.bound && equal_ptr(u.lhs, v.lhs) && equal_ptr(u.rhs, v.rhs);
                                  },
                                  [&](const Until& u) {
                                    const auto& v = std::get<Until>(y.path);
                                    return equal_ptr(u.lhs, v.lhs) && equal_ptr(u.rhs, v.rhs);
                                  },
                              },
                              x.path);
          },
          [&](const RewardQuery& x) {
            const auto& y = std::get<RewardQuery>(b.node);
            if (x.reward != y.reward || !(x.bound == y.bound) || x.form.index() != y.form.index()) return false;
            return std::visit(Overloaded{
                                  [&](const Instantaneous& i) { return i.t == std::get<Instantaneous>(y.form).t; },
                                  [&](const Cumulative& c) { return c.t == std::get<Cumulative>(y.form).t; },
                                  [&](const Reachability& r) {
                                    return equal_ptr(r.target, std::get<Reachability>(y.form).target);
                                  },
                                  [&](const SteadyState&) { return true; },
                              },
                              x.form);
          },
      },
      a.node);
}

std::string to_string(const Formula& f) {
  return std::visit(
      Overloaded{
          [](const True&) { return std::string("true"); },
          [](const Atom& a) {
            return is_identifier(a.name) && !kKeywords.count(a.name) ? a.name : "\"" + a.name + "\"";
          },
          [](const And& a) { return "(" + to_string(*a.lhs) + " & " + to_string(*a.rhs) + ")"; },
          [](const Not& n) { return "!" + to_string(*n.operand); },
          [](const ProbQuery& q) {
            const std::string path = std::visit(
                Overloaded{
                    [](const Next& x) { return "X " + to_string(*x.operand); },
                    [](const BoundedUntil& u) {
                      return to_string(*u.lhs) + " U<=" + std::to_string(u.bound) + " " + to_string(*u.rhs);
                    },
                    [](const Until& u) { return to_string(*u.lhs) + " U " + to_string(*u.rhs); },
                },
                q.path);
            return "P" + bound_string(q.bound) + " [ " + path + " ]";
          },
          [](const RewardQuery& q) {
            const std::string form =
                std::visit(Overloaded{
                               [](const Instantaneous& i) { return "I=" + std::to_string(i.t); },
                               [](const Cumulative& c) { return "C<=" + std::to_string(c.t); },
                               [](const Reachability& r) { return "F " + to_string(*r.target); },
                               [](const SteadyState&) { return std::string("S"); },
                           },
                           q.form);
            const std::string name = q.reward ? "{\"" + *q.reward + "\"}" : "";
            return "R" + name + bound_string(q.bound) + " [ " + form + " ]";
          },
      },
      f.node);
}

FormulaPtr parse(std::string_view text) { return Parser(text).parse_top(); }

std::vector<Property> parse_property_file(std::string_view text) {
  std::vector<Property> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string line(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      if (end == text.size()) break;
      continue;
    }
    const auto last = line.find_last_not_of(" \t");
    std::string trimmed = line.substr(first, last - first + 1);
    try {
      out.push_back({line_no, trimmed, parse(trimmed)});
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column() + first, e.expected());
    }
    if (end == text.size()) break;
  }
  return out;
}

const dtmc::RewardStructure& select_reward(const dtmc::RewardModels& rewards, const RewardQuery& q,
                                           const EvalOptions& opts) {
  const std::optional<std::string>& name = q.reward ? q.reward : opts.default_reward;
  if (name) {
    const auto it = rewards.find(*name);
    if (it == rewards.end()) throw InvalidArgument("unknown reward structure '" + *name + "'");
    return it->second;
  }
  if (rewards.size() == 1) return rewards.begin()->second;
  if (rewards.empty()) throw InvalidArgument("reward query on a model without reward structures");
  throw InvalidArgument("reward query must name one of " + std::to_string(rewards.size()) +
                        " reward structures (R{\"name\"} or a default)");
}

Value evaluate(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const Formula& f, const EvalOptions& opts) {
  const Evaluator ev(d, rewards, opts);
  if (const auto* q = std::get_if<ProbQuery>(&f.node)) {
    const double v = ev.path(*q)[d.initial()];
    if (q->bound.is_query()) return v;
    return compare(v, q->bound);
  }
  if (const auto* q = std::get_if<RewardQuery>(&f.node)) {
    const double v = ev.reward_initial(*q);
    if (q->bound.is_query()) return v;
    return compare(v, q->bound);
  }
  return ev.sat(f);
}

dtmc::StateSet satisfying(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const Formula& f,
                          const EvalOptions& opts) {
  return Evaluator(d, rewards, opts).sat(f);
}

std::vector<double> path_probabilities(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const ProbQuery& q,
                                       const EvalOptions& opts) {
  return Evaluator(d, rewards, opts).path(q);
}

}  // namespace rfidqv::pctl
