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

#include "rfidqv/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <vector>

#include "rfidqv/errors.hpp"

namespace rfidqv::protocol {

std::string to_string(HashId id) {
  switch (id) {
    case HashId::sha256:
      return "sha256";
  }
  return "unknown";
}

HashId parse_hash_id(std::string_view name) {
  if (name == "sha256") return HashId::sha256;
  throw InvalidArgument("unknown hash '" + std::string(name) + "'");
}

void ProtocolConfig::validate() const {
  if (l == 0 || l % 4 != 0) {
    throw InvalidArgument("identifier length l=" + std::to_string(l) + " must be positive and divisible by 4");
  }
}

namespace {

constexpr std::size_t kDigestBytes = 32;
using Digest = std::array<std::uint8_t, kDigestBytes>;

Digest sha256(std::span<const std::uint8_t> data, const std::uint8_t* suffix, std::size_t suffix_len) {
  Digest out{};
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("EVP_MD_CTX_new failed");
  unsigned int len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
                  (suffix_len == 0 || EVP_DigestUpdate(ctx, suffix, suffix_len) == 1) &&
                  EVP_DigestFinal_ex(ctx, out.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || len != kDigestBytes) throw Error("sha256 digest failed");
  return out;
}

}  // namespace

BitString hash(const ProtocolConfig& cfg, const BitString& x) {
  const std::size_t out_bytes = (cfg.l + 7) / 8;
  std::vector<std::uint8_t> buffer;
  buffer.reserve(out_bytes + kDigestBytes);
  const Digest first = sha256(x.bytes(), nullptr, 0);
  buffer.insert(buffer.end(), first.begin(), first.end());
  for (std::uint32_t counter = 1; buffer.size() < out_bytes; ++counter) {
    const std::array<std::uint8_t, 4> suffix{static_cast<std::uint8_t>(counter >> 24),
                                             static_cast<std::uint8_t>(counter >> 16),
                                             static_cast<std::uint8_t>(counter >> 8),
                                             static_cast<std::uint8_t>(counter)};
    const Digest block = sha256(x.bytes(), suffix.data(), suffix.size());
    buffer.insert(buffer.end(), block.begin(), block.end());
  }
  return BitString::from_bytes(buffer, cfg.l);
}

BitString keyed_hash(const ProtocolConfig& cfg, const BitString& key, const BitString& msg) {
  if (key.size() != cfg.l || msg.size() != cfg.l) {
    throw InvalidArgument("keyed_hash: key and message must be " + std::to_string(cfg.l) + " bits (got " +
                          std::to_string(key.size()) + " and " + std::to_string(msg.size()) + ")");
  }
  return hash(cfg, key.concat(msg));
}

}  // namespace rfidqv::protocol
