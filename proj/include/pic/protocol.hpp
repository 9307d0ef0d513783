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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pic/bytes.hpp"
#include "pic/envelope.hpp"
#include "pic/randomizer.hpp"

namespace pic {

// One full PIC round across the three roles (users, shuffler, server),
// simulated in-process. Every value that crosses a role boundary passes
// through the wire codec, so the same role logic can back a networked
// deployment.
//
// A user's one-time pseudonym is the 64-byte concatenation
// box_pk (32) || sign_pk (32): the first half is the retrieval/encryption
// address, the second half verifies post-computation message signatures.

inline constexpr std::size_t kPseudonymBytes =
    kBoxPublicKeyBytes + kSignPublicKeyBytes;

struct GroupSpec {
  MechanismConfig mechanism;  // carries randomizer id, parameters, dimension
};

struct ServerParams {
  Bytes server_public_key;
  std::vector<GroupSpec> group_specs;
  std::string task_id;
};

struct UserState {
  int group_index = 0;
  Vector data;
  // One-time key pairs, regenerated inside user_prepare each round.
  BoxKeyPair box_keys;
  SignKeyPair sign_keys;
  bool has_keys = false;
  std::optional<Bytes> received_output;

  Bytes pseudonym() const;
};

struct BulletinEntry {
  Bytes public_key;        // pseudonym of the anonymous position
  Bytes encrypted_output;  // sealed to the pseudonym's box half
};

struct DirectMessage {
  Bytes recipient_public_key;  // pseudonym of the addressee
  Bytes ciphertext;
  Bytes signature;  // over ciphertext, under sender's sign half
  Bytes sender_public_key;
};

using MessageBoard = std::vector<DirectMessage>;

// Server view of one round. Leakage holds only corrupted (input, position)
// pairs; nothing in this object links an uncorrupted submission index to a
// shuffled position. Decoded inputs and outputs are retained only when
// requested (keep_detail) -- by default a round keeps aggregate counters.
struct RoundTranscript {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> leakage;
  std::vector<std::size_t> envelope_counts;
  bool detail_kept = false;
  std::vector<std::vector<DecodedReport>> decoded;   // L, per group (opt-in)
  std::vector<std::vector<Bytes>> outputs;           // f(L), per group (opt-in)
};

struct RoundResult {
  std::vector<std::vector<BulletinEntry>> bulletin;  // shuffled order
  RoundTranscript transcript;
};

// f: per-group decoded reports, in shuffled order, to one output payload per
// anonymous position (shape must match its input).
using TaskFn = std::function<std::vector<std::vector<Bytes>>(
    const std::vector<std::vector<DecodedReport>>&)>;

struct DeliveryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RoundAbortError : std::runtime_error {
  RoundAbortError(std::size_t failing_count)
      : std::runtime_error("round aborted: " + std::to_string(failing_count) +
                           " envelope(s) failed decryption"),
        failing_count(failing_count) {}
  std::size_t failing_count;
};

struct ServerSetup {
  ServerParams params;
  BoxKeyPair server_keys;
};

// Step 1: publish global parameters. Throws std::invalid_argument on an
// empty group list or an invalid per-group spec.
ServerSetup server_setup(const std::vector<GroupSpec>& groups,
                         const std::string& task_id, EntropyMode mode,
                         Rng& rng);

// Step 2 for one user: sanitize data with the group's randomizer, generate a
// fresh one-time key pair (stored in state), and seal the encoded report to
// the server. Throws std::invalid_argument if data lies outside the group's
// domain.
Envelope user_prepare(UserState& state, const ServerParams& params,
                      EntropyMode mode, Rng& rng);

// Steps 2-5 for all users: prepare, shuffle (recording corrupted-position
// leakage), decrypt and decode every envelope (RoundAbortError if any
// fails), evaluate f, and publish one sealed bulletin entry per anonymous
// position. `corrupted` holds per-group input indices handed to the
// shuffler's leakage.
RoundResult run_round(std::vector<std::vector<UserState>>& users,
                      const ServerParams& params,
                      const BoxKeyPair& server_keys, const TaskFn& task,
                      const std::vector<std::vector<std::size_t>>& corrupted,
                      EntropyMode mode, Rng& rng, bool keep_detail = false);

// Step 6: locate the unique entry carrying the user's pseudonym and unseal
// it. Throws DeliveryError if absent, IntegrityError if unsealing fails.
// The payload is also stored in state.received_output.
Bytes user_retrieve(const std::vector<BulletinEntry>& bulletin,
                    UserState& state);

// Post-computation direct messaging. The recipient pseudonym comes from a
// retrieved task output. Send seals to the box half and signs the
// ciphertext with the sender's sign half.
void post_message_send(const UserState& sender, const Bytes& recipient_pseudonym,
                       const Bytes& plaintext, MessageBoard& board);

struct ReceivedMessages {
  // (sender pseudonym, plaintext), in board order.
  std::vector<std::pair<Bytes, Bytes>> messages;
  std::size_t dropped = 0;  // bad signature or undecryptable
};

ReceivedMessages post_message_receive(const MessageBoard& board,
                                      const UserState& recipient);

// f = identity: each anonymous position receives its own submitted report,
// re-encoded bit-exactly.
TaskFn make_identity_task();

// Payload framing for tasks whose output is a list of (pseudonym, vector)
// pairs, e.g. matched partners or neighbor lists:
//   0x01 || u16 count || count * (u32 item length || encoded report).
Bytes encode_task_payload(const std::vector<DecodedReport>& items);
std::vector<DecodedReport> decode_task_payload(const Bytes& buf);

}  // namespace pic
