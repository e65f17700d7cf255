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
#include <string>
#include <string_view>

#include "rfidqv/bits.hpp"

namespace rfidqv::protocol {

enum class HashId { sha256 };

std::string to_string(HashId id);
HashId parse_hash_id(std::string_view name);

/// Identifier length and hash instantiation shared by every protocol entity.
struct ProtocolConfig {
  std::size_t l = 128;
  HashId hash_id = HashId::sha256;

  /// Throws InvalidArgument unless l > 0 and l % 4 == 0.
  void validate() const;
};

/// h(x): the first l bits of the digest of x's packed bytes. For l above
/// the digest width, further blocks digest(x || counter) are appended.
BitString hash(const ProtocolConfig& cfg, const BitString& x);

/// f_k(m) = h(k || m); key and msg must both be l bits.
BitString keyed_hash(const ProtocolConfig& cfg, const BitString& key, const BitString& msg);

}  // namespace rfidqv::protocol
