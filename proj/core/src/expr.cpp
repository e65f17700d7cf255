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

#include "rfidqv/expr.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "rfidqv/errors.hpp"

namespace rfidqv::gc {

namespace {

struct FnEntry {
  const char* name;
  Op op;
};

constexpr FnEntry kFunctions[] = {
    {"min", Op::fn_min},   {"max", Op::fn_max}, {"floor", Op::fn_floor}, {"ceil", Op::fn_ceil},
    {"pow", Op::fn_pow},   {"mod", Op::fn_mod}, {"binom", Op::fn_binom},
};

std::shared_ptr<Expr> node(Op op) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  return e;
}

// Binding strength used by the printer; mirrors the parser's grammar.
int precedence(Op op) {
  switch (op) {
    case Op::ite: return 1;
    case Op::logical_or: return 2;
    case Op::logical_and: return 3;
    case Op::eq:
    case Op::ne: return 4;
    case Op::lt:
    case Op::le:
    case Op::gt:
    case Op::ge: return 5;
    case Op::add:
    case Op::sub: return 6;
    case Op::mul:
    case Op::div: return 7;
    case Op::neg:
    case Op::logical_not: return 8;
    default: return 9;
  }
}

const char* infix(Op op) {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::lt: return "<";
    case Op::le: return "<=";
    case Op::gt: return ">";
    case Op::ge: return ">=";
    case Op::eq: return "=";
    case Op::ne: return "!=";
    case Op::logical_and: return "&";
    case Op::logical_or: return "|";
    default: return nullptr;
  }
}

std::string format_number(double v) {
  char buf[40];
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  }
  return buf;
}

std::string wrap(const Expr& e, int min_prec) {
  const std::string s = to_string(e);
  return precedence(e.op) < min_prec ? "(" + s + ")" : s;
}

double binom_pmf(double n, double k, double p) {
  if (k < 0 || k > n || n < 0) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double logc = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  return std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace

ExprPtr literal(double v) {
  auto e = node(Op::literal);
  e->value = v;
  return e;
}

ExprPtr identifier(std::string name) {
  auto e = node(Op::identifier);
  e->name = std::move(name);
  return e;
}

ExprPtr variable(std::string name, std::size_t slot) {
  auto e = node(Op::variable);
  e->name = std::move(name);
  e->slot = slot;
  return e;
}

ExprPtr unary(Op op, ExprPtr a) {
  auto e = node(op);
  e->args = {std::move(a)};
  return e;
}

ExprPtr binary(Op op, ExprPtr a, ExprPtr b) {
  auto e = node(op);
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr call(Op op, std::vector<ExprPtr> args) {
  auto e = node(op);
  e->args = std::move(args);
  return e;
}

ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b) {
  auto e = node(Op::ite);
  e->args = {std::move(c), std::move(a), std::move(b)};
  return e;
}

bool function_op(const std::string& name, Op& op) {
  for (const auto& f : kFunctions) {
    if (name == f.name) {
      op = f.op;
      return true;
    }
  }
  return false;
}

const char* function_name(Op op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return nullptr;
}

std::string to_string(const Expr& e) {
  switch (e.op) {
    case Op::literal: return format_number(e.value);
    case Op::identifier:
    case Op::variable: return e.name;
    case Op::neg: return "-" + wrap(*e.args[0], 9);
    case Op::logical_not: return "!" + wrap(*e.args[0], 9);
    case Op::ite:
      return wrap(*e.args[0], 2) + " ? " + wrap(*e.args[1], 2) + " : " + wrap(*e.args[2], 1);
    default: break;
  }
  if (const char* sym = infix(e.op)) {
    const int p = precedence(e.op);
    // Left-associative: the right operand needs strictly tighter binding.
    return wrap(*e.args[0], p) + " " + sym + " " + wrap(*e.args[1], p + 1);
  }
  std::string out = std::string(function_name(e.op)) + "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(*e.args[i]);
  }
  return out + ")";
}

bool equal(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.op == Op::literal && a.value != b.value) return false;
  if ((a.op == Op::identifier || a.op == Op::variable) && a.name != b.name) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

double eval(const Expr& e, std::span<const int> vars) {
  const auto arg = [&](std::size_t i) { return eval(*e.args[i], vars); };
  switch (e.op) {
    case Op::literal: return e.value;
    case Op::variable: return vars[e.slot];
    case Op::identifier: throw ModelError("unresolved identifier '" + e.name + "'");
    case Op::neg: return -arg(0);
    case Op::logical_not: return arg(0) == 0.0 ? 1.0 : 0.0;
    case Op::add: return arg(0) + arg(1);
    case Op::sub: return arg(0) - arg(1);
    case Op::mul: return arg(0) * arg(1);
    case Op::div: {
      const double d = arg(1);
      if (d == 0.0) throw ModelError("division by zero in '" + to_string(e) + "'");
      return arg(0) / d;
    }
    case Op::lt: return arg(0) < arg(1);
    case Op::le: return arg(0) <= arg(1);
    case Op::gt: return arg(0) > arg(1);
    case Op::ge: return arg(0) >= arg(1);
    case Op::eq: return arg(0) == arg(1);
    case Op::ne: return arg(0) != arg(1);
    case Op::logical_and: return arg(0) != 0.0 && arg(1) != 0.0;
    case Op::logical_or: return arg(0) != 0.0 || arg(1) != 0.0;
    case Op::ite: return arg(0) != 0.0 ? arg(1) : arg(2);
    case Op::fn_min: {
      double v = arg(0);
      for (std::size_t i = 1; i < e.args.size(); ++i) v = std::min(v, arg(i));
      return v;
    }
    case Op::fn_max: {
      double v = arg(0);
      for (std::size_t i = 1; i < e.args.size(); ++i) v = std::max(v, arg(i));
      return v;
    }
    case Op::fn_floor: return std::floor(arg(0));
    case Op::fn_ceil: return std::ceil(arg(0));
    case Op::fn_pow: return std::pow(arg(0), arg(1));
    case Op::fn_mod: {
      const double d = arg(1);
      if (d == 0.0) throw ModelError("mod by zero in '" + to_string(e) + "'");
      return std::fmod(arg(0), d);
    }
    case Op::fn_binom: return binom_pmf(arg(0), arg(1), arg(2));
  }
  return 0.0;
}

ExprPtr resolve(const ExprPtr& e, const Scope& scope) {
  if (e->op == Op::identifier) {
    if (const auto c = scope.constants.find(e->name); c != scope.constants.end()) return literal(c->second);
    if (const auto f = scope.formulas.find(e->name); f != scope.formulas.end()) return f->second;
    if (const auto v = scope.variables.find(e->name); v != scope.variables.end()) return variable(e->name, v->second);
    throw ModelError("unknown identifier '" + e->name + "'");
  }
  if (e->args.empty()) return e;
  auto out = std::make_shared<Expr>(*e);
  for (auto& a : out->args) a = resolve(a, scope);
  return fold(out);
}

double eval_constant(const ExprPtr& e, const Scope& scope) {
  Scope consts;
  consts.constants = scope.constants;
  return eval(*resolve(e, consts), {});
}

ExprPtr fold(const ExprPtr& e) {
  if (e->args.empty()) return e;
  for (const auto& a : e->args) {
    if (a->op != Op::literal) return e;
  }
  return literal(eval(*e, {}));
}

}  // namespace rfidqv::gc
