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

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "rfidqv/dtmc.hpp"

namespace rfidqv::dtmc {

/// Explicit chain file:
///
///   dtmc <n_states> <initial>
///   <from> <to> <prob>            one line per transition
///   label <name> <state>...
///   srew <state> <value>          optional, non-zero entries only
///   trew <from> <to> <value>      optional, non-zero entries only
///
/// Reals are written with 17 significant digits, so a write/read cycle
/// reproduces every double exactly. '#' starts a comment.
struct DtmcFile {
  Dtmc dtmc;
  std::optional<RewardStructure> rewards;
};

void write_dtmc(std::ostream& out, const Dtmc& d, const RewardStructure* rewards = nullptr);
std::string to_text(const Dtmc& d, const RewardStructure* rewards = nullptr);

/// Throws ParseError naming the offending line.
DtmcFile read_dtmc(std::istream& in);
DtmcFile parse_dtmc(const std::string& text);

}  // namespace rfidqv::dtmc
