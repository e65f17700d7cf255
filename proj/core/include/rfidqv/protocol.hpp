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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rfidqv/bits.hpp"
#include "rfidqv/hash.hpp"
#include "rfidqv/rng.hpp"

namespace rfidqv::protocol {

/// Nonces a tag holds between answering a challenge and receiving M3.
struct PendingNonces {
  BitString r1;
  BitString r2;
};

struct TagState {
  BitString t;
  std::optional<PendingNonces> pending;
};

/// Server-side record [(u,t)_new, (u,t)_old, D].
struct ServerRecord {
  BitString u_new;
  BitString t_new;
  BitString u_old;
  BitString t_old;
  std::vector<std::uint8_t> d;

  /// t_new == h(u_new) and t_old == h(u_old).
  bool hash_linked(const ProtocolConfig& cfg) const;
};

/// Registers a tag secret u; both the new and old pair start at (u, h(u)).
ServerRecord make_record(const ProtocolConfig& cfg, const BitString& u, std::vector<std::uint8_t> d = {});
TagState make_tag(const ProtocolConfig& cfg, const BitString& u);

struct Challenge {
  BitString r1;
};
struct TagResponse {
  BitString m1;
  BitString m2;
};
struct ReaderForward {
  BitString r1;
  BitString m1;
  BitString m2;
};
struct ServerReply {
  BitString m3;
  std::vector<std::uint8_t> d;
};
struct ReaderRelay {
  BitString m3;
};
struct ServerError {};
/// The tag's local step-6 decision; recorded in transcripts, never sent.
struct TagVerdict {
  bool accepted = false;
};

using Message = std::variant<Challenge, TagResponse, ReaderForward, ServerReply, ReaderRelay, ServerError, TagVerdict>;

std::string message_type(const Message& m);
/// Concatenated lowercase hex of every field, in declaration order.
std::string message_payload(const Message& m);

enum class MatchedPair { new_pair, old_pair };

struct AuthSuccess {
  BitString m3;
  std::vector<std::uint8_t> d;
  MatchedPair matched = MatchedPair::new_pair;
  std::size_t record = 0;
  std::size_t probes = 0;
};

struct AuthFailure {
  std::size_t probes = 0;
};

using AuthOutcome = std::variant<AuthSuccess, AuthFailure>;

/// (u_next, t_next) with u_next = rotl(u, l/4) ^ rotr(t, l/4) ^ r1 ^ r2.
struct IdentifierPair {
  BitString u;
  BitString t;
};

IdentifierPair update_identifiers(const ProtocolConfig& cfg, const BitString& u, const BitString& t,
                                  const BitString& r1, const BitString& r2);

Challenge reader_challenge(const ProtocolConfig& cfg, Rng& rng);

/// Draws r2 and answers the challenge. The returned tag holds the nonces.
std::pair<TagResponse, TagState> tag_respond(const ProtocolConfig& cfg, const TagState& tag, const BitString& r1,
                                             Rng& rng);
/// Same as tag_respond with a caller-chosen r2.
std::pair<TagResponse, TagState> tag_respond_with(const ProtocolConfig& cfg, const TagState& tag,
                                                  const BitString& r1, const BitString& r2);

/// Looks the tag up in db (records in order, new pair before old pair,
/// first match wins) and on success refreshes the matched record.
AuthOutcome server_authenticate(const ProtocolConfig& cfg, std::span<ServerRecord> db, const BitString& r1,
                                const BitString& m1, const BitString& m2);

struct FinalizeOutcome {
  bool accepted = false;
  TagState tag;
};

/// Step 6. Throws InvalidState if the tag has no pending session.
FinalizeOutcome tag_finalize(const ProtocolConfig& cfg, const TagState& tag, const BitString& m3);

/// Fault injected on the reader-tag channel.
class Fault {
 public:
  enum class Kind { none, drop_m3, corrupt };

  static Fault none() { return Fault(Kind::none, 0); }
  static Fault drop_m3() { return Fault(Kind::drop_m3, 5); }
  /// Flips the first bit of the message sent at `step`; only the
  /// reader-tag steps 1, 2 and 5 can be corrupted.
  static Fault corrupt(int step);

  Kind kind() const { return kind_; }
  int step() const { return step_; }

 private:
  Fault(Kind kind, int step) : kind_(kind), step_(step) {}
  Kind kind_;
  int step_;
};

struct TranscriptEntry {
  int step = 0;
  Message message;
};

struct SessionTranscript {
  std::vector<TranscriptEntry> entries;
  bool server_accepted = false;
  bool tag_accepted = false;
  std::size_t probes = 0;
  std::optional<MatchedPair> matched;

  bool mutual() const { return server_accepted && tag_accepted; }
  /// One line per entry: "step=<n> type=<name> payload=<hex>".
  std::string to_text() const;
};

/// Runs steps 1-6 for one tag; the tag and the database are updated in place.
SessionTranscript run_session(const ProtocolConfig& cfg, TagState& tag, std::span<ServerRecord> db, Rng& rng,
                              Fault fault = Fault::none());

}  // namespace rfidqv::protocol
