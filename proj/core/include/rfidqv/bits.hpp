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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfidqv/rng.hpp"

namespace rfidqv {

enum class Direction { left, right };

/// Fixed-length bit string, most significant bit first.
///
/// Bits are packed big-endian into bytes; when the length is not a multiple
/// of eight the unused low-order bits of the last byte are kept at zero, so
/// byte-wise comparison and hashing are well defined.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t bits) : bits_(bits), bytes_((bits + 7) / 8, 0) {}

  static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits);
  /// Parses exactly ceil(bits/8) bytes of hex; throws InvalidArgument.
  static BitString from_hex(std::string_view hex, std::size_t bits);
  /// Parses a string of '0'/'1' characters.
  static BitString from_binary(std::string_view binary);
  static BitString random(std::size_t bits, Rng& rng);

  std::size_t size() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

  bool bit(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1U; }
  void set_bit(std::size_t i, bool value);
  void flip_bit(std::size_t i) { set_bit(i, !bit(i)); }

  std::string to_hex() const;
  std::string to_binary() const;

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString lhs, const BitString& rhs) { return lhs ^= rhs; }
  friend bool operator==(const BitString&, const BitString&) = default;

  /// Concatenation; the result has size() + other.size() bits.
  BitString concat(const BitString& other) const;

 private:
  void clear_padding();

  std::size_t bits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// Circular rotation by k positions; k must not exceed the length.
BitString rot(const BitString& x, std::size_t k, Direction direction);

}  // namespace rfidqv
