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

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rfidqv::gc {

// Expressions are evaluated over doubles; booleans are 0/1 and any non-zero
// value is true. Integer variables must receive integral values.
enum class Op {
  literal,
  identifier,  // unresolved name (constant, formula or variable)
  variable,    // resolved variable slot
  neg,
  logical_not,
  add,
  sub,
  mul,
  div,
  lt,
  le,
  gt,
  ge,
  eq,
  ne,
  logical_and,
  logical_or,
  ite,
  fn_min,
  fn_max,
  fn_floor,
  fn_ceil,
  fn_pow,
  fn_mod,
  fn_binom,  // binom(n, k, p): binomial probability mass
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::literal;
  double value = 0.0;
  std::string name;
  std::size_t slot = 0;
  std::vector<ExprPtr> args;
};

ExprPtr literal(double v);
ExprPtr identifier(std::string name);
ExprPtr variable(std::string name, std::size_t slot);
ExprPtr unary(Op op, ExprPtr a);
ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
ExprPtr call(Op op, std::vector<ExprPtr> args);
ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b);

/// Function name -> op for the call syntax, and back.
bool function_op(const std::string& name, Op& op);
const char* function_name(Op op);

/// Fully parenthesised where needed; re-parses to an equal tree.
std::string to_string(const Expr& e);
bool equal(const Expr& a, const Expr& b);

/// Evaluates a resolved expression; `vars` is indexed by slot.
double eval(const Expr& e, std::span<const int> vars);

/// Name environment used by resolve(): constants become literals, formulas
/// are expanded in place and variables become slots. Unknown names throw
/// ModelError.
struct Scope {
  std::map<std::string, double> constants;
  std::map<std::string, ExprPtr> formulas;  // already resolved
  std::map<std::string, std::size_t> variables;
};

ExprPtr resolve(const ExprPtr& e, const Scope& scope);

/// Evaluates an expression that may only mention constants.
double eval_constant(const ExprPtr& e, const Scope& scope);

/// Literals are folded where every argument is a literal.
ExprPtr fold(const ExprPtr& e);

}  // namespace rfidqv::gc
