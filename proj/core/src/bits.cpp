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

#include "rfidqv/bits.hpp"

#include <algorithm>

#include "rfidqv/errors.hpp"

namespace rfidqv {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
  BitString out(bits);
  if (bytes.size() < out.bytes_.size()) {
    throw InvalidArgument("from_bytes: " + std::to_string(bytes.size()) + " bytes cannot hold " +
                          std::to_string(bits) + " bits");
  }
  std::copy_n(bytes.begin(), out.bytes_.size(), out.bytes_.begin());
  out.clear_padding();
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t bits) {
  BitString out(bits);
  if (hex.size() != out.bytes_.size() * 2) {
    throw InvalidArgument("from_hex: expected " + std::to_string(out.bytes_.size() * 2) + " hex digits, got " +
                          std::to_string(hex.size()));
  }
  for (std::size_t i = 0; i < out.bytes_.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InvalidArgument("from_hex: invalid hex digit");
    out.bytes_[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  if (bits % 8 != 0 && (out.bytes_.back() & ((1U << (8 - bits % 8)) - 1U)) != 0) {
    throw InvalidArgument("from_hex: nonzero padding bits");
  }
  return out;
}

BitString BitString::from_binary(std::string_view binary) {
  BitString out(binary.size());
  for (std::size_t i = 0; i < binary.size(); ++i) {
    if (binary[i] != '0' && binary[i] != '1') throw InvalidArgument("from_binary: expected 0 or 1");
    out.set_bit(i, binary[i] == '1');
  }
  return out;
}

BitString BitString::random(std::size_t bits, Rng& rng) {
  BitString out(bits);
  for (std::size_t i = 0; i < out.bytes_.size(); i += 8) {
    std::uint64_t word = rng.next();
    for (std::size_t j = i; j < std::min(i + 8, out.bytes_.size()); ++j) {
      out.bytes_[j] = static_cast<std::uint8_t>(word >> 56);
      word <<= 8;
    }
  }
  out.clear_padding();
  return out;
}

void BitString::set_bit(std::size_t i, bool value) {
  const auto mask = static_cast<std::uint8_t>(1U << (7 - i % 8));
  if (value) {
    bytes_[i / 8] |= mask;
  } else {
    bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

std::string BitString::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (auto b : bytes_) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

std::string BitString::to_binary() const {
  std::string out(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.bits_ != bits_) {
    throw InvalidArgument("xor of " + std::to_string(bits_) + "-bit and " + std::to_string(other.bits_) +
                          "-bit strings");
  }
  for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

BitString BitString::concat(const BitString& other) const {
  BitString out(bits_ + other.bits_);
  if (bits_ % 8 == 0) {
    std::copy(bytes_.begin(), bytes_.end(), out.bytes_.begin());
    std::copy(other.bytes_.begin(), other.bytes_.end(), out.bytes_.begin() + static_cast<std::ptrdiff_t>(bytes_.size()));
    return out;
  }
  for (std::size_t i = 0; i < bits_; ++i) out.set_bit(i, bit(i));
  for (std::size_t i = 0; i < other.bits_; ++i) out.set_bit(bits_ + i, other.bit(i));
  return out;
}

void BitString::clear_padding() {
  if (bits_ % 8 != 0) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFFU << (8 - bits_ % 8));
  }
}

BitString rot(const BitString& x, std::size_t k, Direction direction) {
  const std::size_t n = x.size();
  if (k > n) {
    throw InvalidArgument("rot: shift " + std::to_string(k) + " exceeds length " + std::to_string(n));
  }
  if (n == 0 || k == 0 || k == n) return x;
  // Left rotation by k moves bit (i + k) mod n to position i.
  const std::size_t offset = direction == Direction::left ? k : n - k;
  BitString out(n);
  for (std::size_t i = 0; i < n; ++i) out.set_bit(i, x.bit((i + offset) % n));
  return out;
}

}  // namespace rfidqv
