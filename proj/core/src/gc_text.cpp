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

#include "rfidqv/gc_text.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "rfidqv/errors.hpp"

namespace rfidqv::gc {

namespace {

enum class T { ident, number, string, sym, end };

struct Token {
  T kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const char* const kSymbols[] = {"->", "..", "<=", ">=", "!=", "[", "]", "(", ")", "{", "}", ";", ":", ",",
                                "+",  "-",  "*",  "/",  "<",  ">", "=", "&", "|", "!", "?", "'"};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, line_start = 0;
  const auto col = [&](std::size_t pos) { return pos - line_start + 1; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({T::ident, std::string(s.substr(start, i - start)), line, col(start)});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      // A '.' followed by another '.' is the range operator, not a fraction.
      if (i < s.size() && s[i] == '.' && !(i + 1 < s.size() && s[i + 1] == '.')) {
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
      out.push_back({T::number, std::string(s.substr(start, i - start)), line, col(start)});
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < s.size() && s[i] != '"' && s[i] != '\n') ++i;
      if (i >= s.size() || s[i] != '"') throw ParseError("unterminated string", line, col(start));
      out.push_back({T::string, std::string(s.substr(start + 1, i - start - 1)), line, col(start)});
      ++i;
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      const std::string_view v(sym);
      if (s.substr(i, v.size()) == v) {
        out.push_back({T::sym, std::string(v), line, col(start)});
        i += v.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, col(start));
  }
  out.push_back({T::end, "", line, col(i)});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Model model() {
    Model m;
    if (is_ident("dtmc")) advance();
    while (!at_end()) {
      if (is_ident("const")) {
        constant(m);
      } else if (is_ident("formula")) {
        advance();
        FormulaDef f{ident_name(), nullptr};
        expect("=");
        f.value = expr();
        expect(";");
        m.formulas.push_back(std::move(f));
      } else if (is_ident("label")) {
        advance();
        LabelDef l{string_lit(), nullptr};
        expect("=");
        l.predicate = expr();
        expect(";");
        m.labels.push_back(std::move(l));
      } else if (is_ident("module")) {
        m.modules.push_back(module());
      } else if (is_ident("rewards")) {
        m.rewards.push_back(rewards());
      } else {
        fail("unexpected '" + peek().text + "'", {"const", "formula", "label", "module", "rewards"});
      }
    }
    return m;
  }

  ExprPtr expression_only() {
    ExprPtr e = expr();
    if (!at_end()) fail("unexpected '" + peek().text + "'", {"end of input"});
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& advance() { return toks_[pos_++]; }
  bool at_end() const { return peek().kind == T::end; }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == T::sym && peek(ahead).text == s;
  }
  bool is_ident(std::string_view s) const { return peek().kind == T::ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
    throw ParseError(msg, peek().line, peek().column, std::move(expected));
  }

  void expect(std::string_view s) {
    if (!is_sym(s)) fail("unexpected '" + (at_end() ? std::string("end of input") : peek().text) + "'", {"'" + std::string(s) + "'"});
    advance();
  }
  void expect_ident(std::string_view s) {
    if (!is_ident(s)) fail("unexpected '" + peek().text + "'", {std::string(s)});
    advance();
  }
  std::string ident_name() {
    if (peek().kind != T::ident) fail("unexpected '" + peek().text + "'", {"identifier"});
    return advance().text;
  }
  std::string string_lit() {
    if (peek().kind != T::string) fail("unexpected '" + peek().text + "'", {"quoted name"});
    return advance().text;
  }

  int constant_int(const ExprPtr& e, const Token& where) {
    double v = 0;
    try {
      v = eval_constant(e, scope_);
    } catch (const ModelError& err) {
      throw ParseError(err.what(), where.line, where.column);
    }
    if (v != std::floor(v) || std::fabs(v) > 2e9) throw ParseError("expected an integer constant", where.line, where.column);
    return static_cast<int>(v);
  }

  void constant(Model& m) {
    advance();
    Constant c;
    if (is_ident("int")) {
      advance();
      c.integer = true;
    } else if (is_ident("double")) {
      advance();
    }
    const Token& at = peek();
    c.name = ident_name();
    expect("=");
    c.value = expr();
    expect(";");
    double v = 0;
    try {
      v = eval_constant(c.value, scope_);
    } catch (const ModelError& err) {
      throw ParseError(err.what(), at.line, at.column);
    }
    if (c.integer && v != std::floor(v)) throw ParseError("int constant '" + c.name + "' is not integral", at.line, at.column);
    scope_.constants[c.name] = v;
    m.constants.push_back(std::move(c));
  }

  Module module() {
    advance();
    Module mod;
    mod.name = ident_name();
    while (!is_ident("endmodule")) {
      if (at_end()) fail("unexpected end of input", {"endmodule"});
      if (is_ident("var")) {
        advance();
        Variable v;
        v.name = ident_name();
        expect(":");
        expect("[");
        const Token& lo_at = peek();
        v.lo = constant_int(expr(), lo_at);
        expect("..");
        const Token& hi_at = peek();
        v.hi = constant_int(expr(), hi_at);
        expect("]");
        expect_ident("init");
        const Token& init_at = peek();
        v.init = constant_int(expr(), init_at);
        expect(";");
        mod.variables.push_back(std::move(v));
      } else if (is_sym("[")) {
        mod.commands.push_back(command());
      } else {
        fail("unexpected '" + peek().text + "'", {"var", "'['", "endmodule"});
      }
    }
    advance();
    return mod;
  }

  std::string action() {
    expect("[");
    std::string a;
    if (peek().kind == T::ident) a = advance().text;
    expect("]");
    return a;
  }

  Command command() {
    Command c;
    c.action = action();
    c.guard = expr();
    expect("->");
    c.updates.push_back(update());
    while (is_sym("+")) {
      advance();
      c.updates.push_back(update());
    }
    expect(";");
    return c;
  }

  bool at_assignment() const {
    return (is_sym("(") && peek(1).kind == T::ident && peek(2).kind == T::sym && peek(2).text == "'") ||
           (is_ident("true") && (is_sym(";", 1) || is_sym("+", 1)));
  }

  Update update() {
    Update u;
    if (at_assignment()) {
      u.probability = literal(1.0);
    } else {
      u.probability = expr();
      expect(":");
    }
    if (is_ident("true")) {
      advance();
      return u;
    }
    for (;;) {
      expect("(");
      Assignment a;
      a.variable = ident_name();
      expect("'");
      expect("=");
      a.value = expr();
      expect(")");
      u.assignments.push_back(std::move(a));
      if (!is_sym("&")) break;
      advance();
    }
    return u;
  }

  RewardDef rewards() {
    advance();
    RewardDef r;
    r.name = string_lit();
    while (!is_ident("endrewards")) {
      if (at_end()) fail("unexpected end of input", {"endrewards"});
      if (is_sym("[")) {
        TransitionRewardItem item;
        item.action = action();
        item.guard = expr();
        expect(":");
        item.value = expr();
        expect(";");
        r.transition_items.push_back(std::move(item));
      } else {
        StateRewardItem item;
        item.guard = expr();
        expect(":");
        item.value = expr();
        expect(";");
        r.state_items.push_back(std::move(item));
      }
    }
    advance();
    return r;
  }

  // Expressions, loosest first.
  ExprPtr expr() {
    ExprPtr c = disjunction();
    if (is_sym("?")) {
      advance();
      ExprPtr a = expr();
      expect(":");
      ExprPtr b = expr();
      return ite(std::move(c), std::move(a), std::move(b));
    }
    return c;
  }

  ExprPtr disjunction() {
    ExprPtr l = conjunction();
    while (is_sym("|")) {
      advance();
      l = binary(Op::logical_or, l, conjunction());
    }
    return l;
  }

  ExprPtr conjunction() {
    ExprPtr l = equality();
    while (is_sym("&")) {
      advance();
      l = binary(Op::logical_and, l, equality());
    }
    return l;
  }

  ExprPtr equality() {
    ExprPtr l = relation();
    while (is_sym("=") || is_sym("!=")) {
      const Op op = advance().text == "=" ? Op::eq : Op::ne;
      l = binary(op, l, relation());
    }
    return l;
  }

  ExprPtr relation() {
    ExprPtr l = additive();
    while (is_sym("<") || is_sym("<=") || is_sym(">") || is_sym(">=")) {
      const std::string s = advance().text;
      const Op op = s == "<" ? Op::lt : s == "<=" ? Op::le : s == ">" ? Op::gt : Op::ge;
      l = binary(op, l, additive());
    }
    return l;
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (is_sym("+") || is_sym("-")) {
      const Op op = advance().text == "+" ? Op::add : Op::sub;
      l = binary(op, l, multiplicative());
    }
    return l;
  }

  ExprPtr multiplicative() {
    ExprPtr l = prefix();
    while (is_sym("*") || is_sym("/")) {
      const Op op = advance().text == "*" ? Op::mul : Op::div;
      l = binary(op, l, prefix());
    }
    return l;
  }

  ExprPtr prefix() {
    if (is_sym("-")) {
      advance();
      ExprPtr a = prefix();
      if (a->op == Op::literal) return literal(-a->value);
      return unary(Op::neg, a);
    }
    if (is_sym("!")) {
      advance();
      return unary(Op::logical_not, prefix());
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == T::number) {
      advance();
      return literal(std::strtod(t.text.c_str(), nullptr));
    }
    if (t.kind == T::ident) {
      advance();
      if (t.text == "true") return literal(1.0);
      if (t.text == "false") return literal(0.0);
      Op fn;
      if (is_sym("(") && function_op(t.text, fn)) {
        advance();
        std::vector<ExprPtr> args{expr()};
        while (is_sym(",")) {
          advance();
          args.push_back(expr());
        }
        expect(")");
        const std::size_t want = fn == Op::fn_floor || fn == Op::fn_ceil ? 1
                                 : fn == Op::fn_binom                    ? 3
                                 : fn == Op::fn_pow || fn == Op::fn_mod  ? 2
                                                                         : 0;
        if ((want && args.size() != want) || (!want && args.size() < 2)) {
          throw ParseError("wrong number of arguments to " + t.text, t.line, t.column);
        }
        return call(fn, std::move(args));
      }
      return identifier(t.text);
    }
    if (is_sym("(")) {
      advance();
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    fail("unexpected '" + (at_end() ? std::string("end of input") : t.text) + "'",
         {"number", "identifier", "'('", "'-'", "'!'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Scope scope_;
};

}  // namespace

Model parse_model(std::string_view text) { return Parser(text).model(); }

ExprPtr parse_expression(std::string_view text) { return Parser(text).expression_only(); }

std::string to_text(const Model& m) {
  std::ostringstream out;
  out << "dtmc\n";
  if (!m.constants.empty()) out << '\n';
  for (const auto& c : m.constants) {
    out << "const " << (c.integer ? "int " : "double ") << c.name << " = " << to_string(*c.value) << ";\n";
  }
  if (!m.formulas.empty()) out << '\n';
  for (const auto& f : m.formulas) out << "formula " << f.name << " = " << to_string(*f.value) << ";\n";
  for (const auto& mod : m.modules) {
    out << "\nmodule " << mod.name << '\n';
    for (const auto& v : mod.variables) {
      out << "  var " << v.name << " : [" << v.lo << ".." << v.hi << "] init " << v.init << ";\n";
    }
    for (const auto& c : mod.commands) {
      out << "  [" << c.action << "] " << to_string(*c.guard) << " ->";
      for (std::size_t i = 0; i < c.updates.size(); ++i) {
        const auto& u = c.updates[i];
        out << (i ? "\n      + " : " ") << to_string(*u.probability) << " : ";
        if (u.assignments.empty()) out << "true";
        for (std::size_t j = 0; j < u.assignments.size(); ++j) {
          out << (j ? " & " : "") << '(' << u.assignments[j].variable << "'=" << to_string(*u.assignments[j].value)
              << ')';
        }
      }
      out << ";\n";
    }
    out << "endmodule\n";
  }
  if (!m.labels.empty()) out << '\n';
  for (const auto& l : m.labels) out << "label \"" << l.name << "\" = " << to_string(*l.predicate) << ";\n";
  for (const auto& r : m.rewards) {
    out << "\nrewards \"" << r.name << "\"\n";
    for (const auto& s : r.state_items) out << "  " << to_string(*s.guard) << " : " << to_string(*s.value) << ";\n";
    for (const auto& t : r.transition_items) {
      out << "  [" << t.action << "] " << to_string(*t.guard) << " : " << to_string(*t.value) << ";\n";
    }
    out << "endrewards\n";
  }
  return out.str();
}

}  // namespace rfidqv::gc
