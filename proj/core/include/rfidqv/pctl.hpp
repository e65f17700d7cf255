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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rfidqv/analysis.hpp"
#include "rfidqv/dtmc.hpp"

namespace rfidqv::pctl {

enum class Comparison { less, less_equal, greater, greater_equal };

/// `=?` when op is empty, otherwise `<op> threshold`.
struct Bound {
  std::optional<Comparison> op;
  double threshold = 0.0;

  bool is_query() const { return !op.has_value(); }
  static Bound query() { return {}; }
  friend bool operator==(const Bound&, const Bound&) = default;
};

bool compare(double value, const Bound& bound);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct True {};
struct Atom {
  std::string name;
};
struct And {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
struct Not {
  FormulaPtr operand;
};

struct Next {
  FormulaPtr operand;
};
struct BoundedUntil {
  FormulaPtr lhs;
  FormulaPtr rhs;
  std::size_t bound = 0;
};
struct Until {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
using PathFormula = std::variant<Next, BoundedUntil, Until>;

struct ProbQuery {
  Bound bound;
  PathFormula path;
};

struct Instantaneous {
  std::size_t t = 0;
};
struct Cumulative {
  std::size_t t = 0;
};
struct Reachability {
  FormulaPtr target;
};
struct SteadyState {};
using RewardForm = std::variant<Instantaneous, Cumulative, Reachability, SteadyState>;

struct RewardQuery {
  std::optional<std::string> reward;
  Bound bound;
  RewardForm form;
};

struct Formula {
  std::variant<True, Atom, And, Not, ProbQuery, RewardQuery> node;
};

FormulaPtr make_true();
FormulaPtr make_atom(std::string name);
FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_not(FormulaPtr operand);
FormulaPtr make_prob(Bound bound, PathFormula path);
FormulaPtr make_reward(std::optional<std::string> reward, Bound bound, RewardForm form);

/// Deep structural equality.
bool equal(const Formula& a, const Formula& b);

/// Canonical surface syntax; parse(to_string(f)) is structurally equal to f.
std::string to_string(const Formula& f);

/// Surface syntax:
///
///   phi  ::= true | name | "name" | phi & phi | !phi | (phi)
///          | P<op>p [ path ] | P=? [ path ]
///          | R{"rew"}<op>r [ rform ] | R=? [ rform ]
///   path ::= X phi | phi U phi | phi U<=t phi | F phi | F<=t phi
///   rform::= I=t | C<=t | F phi | S
///
/// `!` binds tighter than `&`; `U` does not associate. `F phi` inside P is
/// read as `true U phi`, `F<=t phi` as `true U<=t phi`. Throws ParseError with the column of the failure.
FormulaPtr parse(std::string_view text);

struct Property {
  std::size_t line = 0;
  std::string text;
  FormulaPtr formula;
};

/// One property per non-blank line; `#` starts a comment. ParseError line
/// numbers refer to the file.
std::vector<Property> parse_property_file(std::string_view text);

using Value = std::variant<bool, double, dtmc::StateSet>;

struct EvalOptions {
  /// Reward structure used by R queries that do not name one.
  std::optional<std::string> default_reward;
  dtmc::SolverOptions solver;
};

/// State formulas yield the satisfying set. A top-level P or R query yields
/// its value at the initial state (`=?`) or the comparison there.
Value evaluate(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const Formula& f,
               const EvalOptions& opts = {});

/// Satisfaction set of a state formula; `=?` queries are rejected here.
dtmc::StateSet satisfying(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const Formula& f,
                          const EvalOptions& opts = {});

/// Value of a P query at every state.
std::vector<double> path_probabilities(const dtmc::Dtmc& d, const dtmc::RewardModels& rewards, const ProbQuery& q,
                                       const EvalOptions& opts = {});

/// The reward structure an R query refers to; throws InvalidArgument if
/// none can be chosen.
const dtmc::RewardStructure& select_reward(const dtmc::RewardModels& rewards, const RewardQuery& q,
                                           const EvalOptions& opts);

}  // namespace rfidqv::pctl
