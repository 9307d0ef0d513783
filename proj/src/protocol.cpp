// Copyright 2026 The PIC Library Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pic/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace pic {

namespace {

constexpr std::uint8_t kPayloadVersion = 0x01;

Bytes box_half(const Bytes& pseudonym) {
  if (pseudonym.size() != kPseudonymBytes) {
    throw std::invalid_argument("pseudonym: wrong length");
  }
  return Bytes(pseudonym.begin(), pseudonym.begin() + kBoxPublicKeyBytes);
}

Bytes sign_half(const Bytes& pseudonym) {
  if (pseudonym.size() != kPseudonymBytes) {
    throw std::invalid_argument("pseudonym: wrong length");
  }
  return Bytes(pseudonym.begin() + kBoxPublicKeyBytes, pseudonym.end());
}

void validate_spec(const GroupSpec& spec) {
  if (spec.mechanism.dim < 1) {
    throw std::invalid_argument("group spec: dimension < 1");
  }
  // Re-resolving the mechanism validates the id and parameters.
  make_mechanism(spec.mechanism.id, spec.mechanism.epsilon, spec.mechanism.dim,
                 spec.mechanism.domain_shape, spec.mechanism.radius_mode);
}

}  // namespace

Bytes UserState::pseudonym() const {
  if (!has_keys) throw std::logic_error("pseudonym: no keys this round");
  Bytes out = box_keys.public_key;
  out.insert(out.end(), sign_keys.public_key.begin(),
             sign_keys.public_key.end());
  return out;
}

ServerSetup server_setup(const std::vector<GroupSpec>& groups,
                         const std::string& task_id, EntropyMode mode,
                         Rng& rng) {
  if (groups.empty()) throw std::invalid_argument("server_setup: no groups");
  if (task_id.empty()) throw std::invalid_argument("server_setup: empty task id");
  for (const auto& g : groups) validate_spec(g);
  ServerSetup out;
  out.server_keys = box_keygen(mode, rng);
  out.params.server_public_key = out.server_keys.public_key;
  out.params.group_specs = groups;
  out.params.task_id = task_id;
  return out;
}

Envelope user_prepare(UserState& state, const ServerParams& params,
                      EntropyMode mode, Rng& rng) {
  const auto& spec = params.group_specs.at(
      static_cast<std::size_t>(state.group_index));
  const MechanismConfig& mech = spec.mechanism;
  if (static_cast<int>(state.data.size()) != mech.dim) {
    throw std::invalid_argument("user_prepare: data dimension mismatch");
  }
  const Region domain{mech.domain_shape, Vector(state.data.size(), 0.0), 1.0};
  if (!region_contains(domain, state.data)) {
    throw std::invalid_argument("user_prepare: data outside the group domain");
  }
  const SanitizedReport sanitized = sanitize(state.data, mech, rng);
  state.box_keys = box_keygen(mode, rng);
  state.sign_keys = sign_keygen(mode, rng);
  state.has_keys = true;
  state.received_output.reset();
  const Bytes report = encode_report(state.pseudonym(), sanitized.raw);
  return Envelope{encrypt(params.server_public_key, report)};
}

RoundResult run_round(std::vector<std::vector<UserState>>& users,
                      const ServerParams& params,
                      const BoxKeyPair& server_keys, const TaskFn& task,
                      const std::vector<std::vector<std::size_t>>& corrupted,
                      EntropyMode mode, Rng& rng, bool keep_detail) {
  const std::size_t n_groups = params.group_specs.size();
  if (users.size() != n_groups) {
    throw std::invalid_argument("run_round: group count mismatch");
  }
  if (!corrupted.empty() && corrupted.size() != n_groups) {
    throw std::invalid_argument("run_round: corrupted set count mismatch");
  }

  RoundResult result;
  result.transcript.leakage.resize(n_groups);
  result.transcript.envelope_counts.resize(n_groups);
  result.transcript.detail_kept = keep_detail;

  std::vector<std::vector<DecodedReport>> decoded(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    // Step 2: each user seals a report; the envelope crosses the user ->
    // shuffler boundary in wire form.
    std::vector<Envelope> envelopes;
    envelopes.reserve(users[g].size());
    for (UserState& u : users[g]) {
      const Bytes wire = envelope_serialize(user_prepare(u, params, mode, rng));
      envelopes.push_back(envelope_deserialize(wire));
    }
    // Step 3: shuffle; only corrupted positions leak.
    const std::vector<std::size_t> none;
    ShuffleResult shuffled = shuffle_envelopes(
        envelopes, corrupted.empty() ? none : corrupted[g], rng);
    result.transcript.leakage[g] = shuffled.leakage;
    result.transcript.envelope_counts[g] = shuffled.permuted.size();
    // Step 4: server opens every envelope; abort on any failure.
    std::size_t failing = 0;
    decoded[g].reserve(shuffled.permuted.size());
    for (const Envelope& env : shuffled.permuted) {
      const auto plain = decrypt(server_keys, env.ciphertext);
      if (!plain) {
        ++failing;
        continue;
      }
      try {
        decoded[g].push_back(decode_report(*plain));
      } catch (const CodecError&) {
        ++failing;
      }
    }
    if (failing > 0) throw RoundAbortError(failing);
    const int want = params.group_specs[g].mechanism.dim;
    for (const auto& rep : decoded[g]) {
      if (static_cast<int>(rep.report.size()) != want) {
        throw RoundAbortError(1);
      }
    }
  }

  // Step 5: evaluate f over the shuffled lists and publish.
  std::vector<std::vector<Bytes>> outputs = task(decoded);
  if (outputs.size() != n_groups) {
    throw std::invalid_argument("run_round: task output group count mismatch");
  }
  result.bulletin.resize(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (outputs[g].size() != decoded[g].size()) {
      throw std::invalid_argument("run_round: task output length mismatch");
    }
    result.bulletin[g].reserve(decoded[g].size());
    for (std::size_t pos = 0; pos < decoded[g].size(); ++pos) {
      const Bytes& pk = decoded[g][pos].public_key;
      result.bulletin[g].push_back(
          BulletinEntry{pk, encrypt(box_half(pk), outputs[g][pos])});
    }
  }
  if (keep_detail) {
    result.transcript.decoded = std::move(decoded);
    result.transcript.outputs = std::move(outputs);
  }
  return result;
}

Bytes user_retrieve(const std::vector<BulletinEntry>& bulletin,
                    UserState& state) {
  const Bytes own = state.pseudonym();
  const BulletinEntry* found = nullptr;
  for (const auto& entry : bulletin) {
    if (entry.public_key == own) {
      found = &entry;
      break;
    }
  }
  if (found == nullptr) {
    throw DeliveryError("user_retrieve: no entry for this pseudonym");
  }
  const auto plain = decrypt(state.box_keys, found->encrypted_output);
  if (!plain) {
    throw IntegrityError("user_retrieve: payload failed decryption");
  }
  state.received_output = *plain;
  return *plain;
}

void post_message_send(const UserState& sender,
                       const Bytes& recipient_pseudonym, const Bytes& plaintext,
                       MessageBoard& board) {
  if (!sender.has_keys) {
    throw std::logic_error("post_message_send: sender has no keys");
  }
  DirectMessage msg;
  msg.recipient_public_key = recipient_pseudonym;
  msg.ciphertext = encrypt(box_half(recipient_pseudonym), plaintext);
  msg.signature = sign_detached(sender.sign_keys.secret_key, msg.ciphertext);
  msg.sender_public_key = sender.pseudonym();
  board.push_back(std::move(msg));
}

ReceivedMessages post_message_receive(const MessageBoard& board,
                                      const UserState& recipient) {
  const Bytes own = recipient.pseudonym();
  ReceivedMessages out;
  for (const auto& msg : board) {
    if (msg.recipient_public_key != own) continue;
    if (msg.sender_public_key.size() != kPseudonymBytes ||
        !verify_detached(sign_half(msg.sender_public_key), msg.ciphertext,
                         msg.signature)) {
      ++out.dropped;
      continue;
    }
    const auto plain = decrypt(recipient.box_keys, msg.ciphertext);
    if (!plain) {
      ++out.dropped;
      continue;
    }
    out.messages.emplace_back(msg.sender_public_key, *plain);
  }
  return out;
}

TaskFn make_identity_task() {
  return [](const std::vector<std::vector<DecodedReport>>& groups) {
    std::vector<std::vector<Bytes>> out(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      out[g].reserve(groups[g].size());
      for (const auto& rep : groups[g]) {
        out[g].push_back(encode_report(rep.public_key, rep.report));
      }
    }
    return out;
  };
}

Bytes encode_task_payload(const std::vector<DecodedReport>& items) {
  if (items.size() > 0xffff) {
    throw std::invalid_argument("encode_task_payload: too many items");
  }
  Bytes out;
  out.push_back(kPayloadVersion);
  put_u16be(out, static_cast<std::uint16_t>(items.size()));
  for (const auto& item : items) {
    const Bytes enc = encode_report(item.public_key, item.report);
    put_u32be(out, static_cast<std::uint32_t>(enc.size()));
    out.insert(out.end(), enc.begin(), enc.end());
  }
  return out;
}

std::vector<DecodedReport> decode_task_payload(const Bytes& buf) {
  ByteReader r(buf);
  const std::size_t vpos = r.position();
  if (r.get_u8("payload version") != kPayloadVersion) {
    throw CodecError("unsupported payload version", vpos);
  }
  const std::uint16_t count = r.get_u16be("item count");
  std::vector<DecodedReport> items;
  items.reserve(count);
  for (std::uint16_t k = 0; k < count; ++k) {
    const std::uint32_t len = r.get_u32be("item length");
    items.push_back(decode_report(r.get_bytes(len, "item bytes")));
  }
  r.expect_end("payload");
  return items;
}

}  // namespace pic
