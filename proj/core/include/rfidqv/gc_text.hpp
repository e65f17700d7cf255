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

#include <string>
#include <string_view>

#include "rfidqv/gc_model.hpp"

namespace rfidqv::gc {

/// Text format:
///
///   dtmc                                   (optional header)
///   const int K = 3;  const double p = 0.5;
///   formula busy = x + y;
///   module M
///     var x : [0..K] init 0;
///     [act] x < K -> p : (x'=x+1) + 1-p : (x'=0);
///   endmodule
///   label "full" = x = K;
///   rewards "cost"
///     x > 0 : 1;          state reward
///     [act] true : 2;     transition reward
///   endrewards
///
/// `//` starts a comment. Range bounds and initial values must be constant.
/// Throws ParseError with line and column.
Model parse_model(std::string_view text);

/// One expression in the same syntax (identifiers left unresolved).
ExprPtr parse_expression(std::string_view text);

/// Canonical text; parse_model(to_text(m)) reproduces m.
std::string to_text(const Model& m);

}  // namespace rfidqv::gc
