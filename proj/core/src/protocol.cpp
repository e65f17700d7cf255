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

#include "rfidqv/protocol.hpp"

#include <sstream>

#include "rfidqv/errors.hpp"

namespace rfidqv::protocol {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string bytes_hex(const std::vector<std::uint8_t>& d) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  for (auto b : d) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

void require_length(const ProtocolConfig& cfg, const BitString& x, const char* name) {
  if (x.size() != cfg.l) {
    throw InvalidArgument(std::string(name) + " must be " + std::to_string(cfg.l) + " bits, got " +
                          std::to_string(x.size()));
  }
}

}  // namespace

bool ServerRecord::hash_linked(const ProtocolConfig& cfg) const {
  return t_new == hash(cfg, u_new) && t_old == hash(cfg, u_old);
}

ServerRecord make_record(const ProtocolConfig& cfg, const BitString& u, std::vector<std::uint8_t> d) {
  require_length(cfg, u, "u");
  const BitString t = hash(cfg, u);
  return ServerRecord{u, t, u, t, std::move(d)};
}

TagState make_tag(const ProtocolConfig& cfg, const BitString& u) {
  require_length(cfg, u, "u");
  return TagState{hash(cfg, u), std::nullopt};
}

std::string message_type(const Message& m) {
  return std::visit(Overloaded{
                        [](const Challenge&) { return std::string("challenge"); },
                        [](const TagResponse&) { return std::string("tag_response"); },
                        [](const ReaderForward&) { return std::string("reader_forward"); },
                        [](const ServerReply&) { return std::string("server_reply"); },
                        [](const ReaderRelay&) { return std::string("reader_relay"); },
                        [](const ServerError&) { return std::string("server_error"); },
                        [](const TagVerdict&) { return std::string("tag_verdict"); },
                    },
                    m);
}

std::string message_payload(const Message& m) {
  return std::visit(Overloaded{
                        [](const Challenge& c) { return c.r1.to_hex(); },
                        [](const TagResponse& r) { return r.m1.to_hex() + r.m2.to_hex(); },
                        [](const ReaderForward& f) { return f.r1.to_hex() + f.m1.to_hex() + f.m2.to_hex(); },
                        [](const ServerReply& s) { return s.m3.to_hex() + bytes_hex(s.d); },
                        [](const ReaderRelay& r) { return r.m3.to_hex(); },
                        [](const ServerError&) { return std::string(); },
                        [](const TagVerdict& v) { return std::string(v.accepted ? "01" : "00"); },
                    },
                    m);
}

IdentifierPair update_identifiers(const ProtocolConfig& cfg, const BitString& u, const BitString& t,
                                  const BitString& r1, const BitString& r2) {
  require_length(cfg, u, "u");
  require_length(cfg, t, "t");
  require_length(cfg, r1, "r1");
  require_length(cfg, r2, "r2");
  const std::size_t quarter = cfg.l / 4;
  BitString next = rot(u, quarter, Direction::left) ^ rot(t, quarter, Direction::right) ^ r1 ^ r2;
  BitString t_next = hash(cfg, next);
  return IdentifierPair{std::move(next), std::move(t_next)};
}

Challenge reader_challenge(const ProtocolConfig& cfg, Rng& rng) {
  return Challenge{BitString::random(cfg.l, rng)};
}

std::pair<TagResponse, TagState> tag_respond(const ProtocolConfig& cfg, const TagState& tag, const BitString& r1,
                                             Rng& rng) {
  return tag_respond_with(cfg, tag, r1, BitString::random(cfg.l, rng));
}

std::pair<TagResponse, TagState> tag_respond_with(const ProtocolConfig& cfg, const TagState& tag,
                                                  const BitString& r1, const BitString& r2) {
  require_length(cfg, tag.t, "t");
  require_length(cfg, r1, "r1");
  require_length(cfg, r2, "r2");
  TagResponse response{tag.t ^ r2, keyed_hash(cfg, tag.t, r1 ^ r2)};
  TagState next = tag;
  next.pending = PendingNonces{r1, r2};
  return {std::move(response), std::move(next)};
}

AuthOutcome server_authenticate(const ProtocolConfig& cfg, std::span<ServerRecord> db, const BitString& r1,
                                const BitString& m1, const BitString& m2) {
  require_length(cfg, r1, "r1");
  require_length(cfg, m1, "m1");
  require_length(cfg, m2, "m2");
  std::size_t probes = 0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    ServerRecord& record = db[i];
    for (const MatchedPair which : {MatchedPair::new_pair, MatchedPair::old_pair}) {
      const BitString& t = which == MatchedPair::new_pair ? record.t_new : record.t_old;
      const BitString r2 = m1 ^ t;
      ++probes;
      if (keyed_hash(cfg, t, r1 ^ r2) != m2) continue;

      const BitString u = which == MatchedPair::new_pair ? record.u_new : record.u_old;
      const BitString t_matched = t;
      AuthSuccess success;
      success.m3 = u ^ rot(r2, cfg.l / 2, Direction::right);
      success.d = record.d;
      success.matched = which;
      success.record = i;
      success.probes = probes;

      IdentifierPair next = update_identifiers(cfg, u, t_matched, r1, r2);
      record.u_old = u;
      record.t_old = t_matched;
      record.u_new = std::move(next.u);
      record.t_new = std::move(next.t);
      return success;
    }
  }
  return AuthFailure{probes};
}

FinalizeOutcome tag_finalize(const ProtocolConfig& cfg, const TagState& tag, const BitString& m3) {
  if (!tag.pending) throw InvalidState("tag_finalize: no pending session");
  require_length(cfg, m3, "m3");
  const auto& [r1, r2] = *tag.pending;
  const BitString u = m3 ^ rot(r2, cfg.l / 2, Direction::right);
  FinalizeOutcome out{false, TagState{tag.t, std::nullopt}};
  if (hash(cfg, u) == tag.t) {
    out.accepted = true;
    out.tag.t = update_identifiers(cfg, u, tag.t, r1, r2).t;
  }
  return out;
}

Fault Fault::corrupt(int step) {
  if (step != 1 && step != 2 && step != 5) {
    throw InvalidArgument("only reader-tag steps 1, 2 and 5 can be corrupted, got step " + std::to_string(step));
  }
  return Fault(Kind::corrupt, step);
}

std::string SessionTranscript::to_text() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << "step=" << e.step << " type=" << message_type(e.message) << " payload=" << message_payload(e.message)
        << '\n';
  }
  return out.str();
}

SessionTranscript run_session(const ProtocolConfig& cfg, TagState& tag, std::span<ServerRecord> db, Rng& rng,
                              Fault fault) {
  const auto corrupted = [&](int step) { return fault.kind() == Fault::Kind::corrupt && fault.step() == step; };
  SessionTranscript tr;

  // Step 1: reader -> tag.
  Challenge challenge = reader_challenge(cfg, rng);
  tr.entries.push_back({1, challenge});
  BitString r1_at_tag = challenge.r1;
  if (corrupted(1)) r1_at_tag.flip_bit(0);

  // Step 2: tag -> reader.
  auto [response, responded] = tag_respond(cfg, tag, r1_at_tag, rng);
  tag = std::move(responded);
  tr.entries.push_back({2, response});
  if (corrupted(2)) response.m1.flip_bit(0);

  // Step 3: reader -> server over the secure channel.
  ReaderForward forward{challenge.r1, response.m1, response.m2};
  tr.entries.push_back({3, forward});

  // Step 4: server lookup.
  AuthOutcome outcome = server_authenticate(cfg, db, forward.r1, forward.m1, forward.m2);
  if (const auto* failure = std::get_if<AuthFailure>(&outcome)) {
    tr.probes = failure->probes;
    tr.entries.push_back({4, ServerError{}});
    return tr;
  }
  auto& success = std::get<AuthSuccess>(outcome);
  tr.server_accepted = true;
  tr.probes = success.probes;
  tr.matched = success.matched;
  tr.entries.push_back({4, ServerReply{success.m3, success.d}});

  // Step 5: reader -> tag.
  ReaderRelay relay{success.m3};
  tr.entries.push_back({5, relay});
  if (fault.kind() == Fault::Kind::drop_m3) return tr;
  if (corrupted(5)) relay.m3.flip_bit(0);

  // Step 6: tag verifies the server.
  FinalizeOutcome fin = tag_finalize(cfg, tag, relay.m3);
  tag = std::move(fin.tag);
  tr.tag_accepted = fin.accepted;
  tr.entries.push_back({6, TagVerdict{fin.accepted}});
  return tr;
}

}  // namespace rfidqv::protocol
