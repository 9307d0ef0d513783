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
#include <optional>
#include <utility>
#include <vector>

#include "pic/bytes.hpp"
#include "pic/geometry.hpp"

namespace pic {

// Cryptographic envelope layer: X25519 sealed-box public-key encryption and
// Ed25519 detached signatures (libsodium), plus the fixed wire formats for
// reports, envelopes, and the shuffler.

inline constexpr std::size_t kBoxPublicKeyBytes = 32;
inline constexpr std::size_t kBoxSecretKeyBytes = 32;
inline constexpr std::size_t kSealOverheadBytes = 48;  // ephemeral pk + MAC
inline constexpr std::size_t kSignPublicKeyBytes = 32;
inline constexpr std::size_t kSignSecretKeyBytes = 64;
inline constexpr std::size_t kSignatureBytes = 64;
inline constexpr std::size_t kMaxPlaintextBytes = 64 * 1024;

// kOs draws key material from the OS. kSeeded derives it from the caller's
// Rng so tests can reproduce key pairs; never use it outside tests.
enum class EntropyMode { kOs, kSeeded };

struct BoxKeyPair {
  Bytes public_key;  // kBoxPublicKeyBytes
  Bytes secret_key;  // kBoxSecretKeyBytes
};

struct SignKeyPair {
  Bytes public_key;  // kSignPublicKeyBytes
  Bytes secret_key;  // kSignSecretKeyBytes
};

// Idempotent libsodium initialization; called internally by every entry
// point, exposed for explicitness in long-lived processes.
void crypto_init();

BoxKeyPair box_keygen(EntropyMode mode, Rng& rng);
SignKeyPair sign_keygen(EntropyMode mode, Rng& rng);

// Sealed-box encrypt to `recipient_pk`. Ciphertext is plaintext size plus
// kSealOverheadBytes and is randomized (repeat calls differ). Throws
// std::invalid_argument on a bad key size or a plaintext over
// kMaxPlaintextBytes.
Bytes encrypt(const Bytes& recipient_pk, const Bytes& plaintext);

// nullopt on authentication failure (wrong key, tampered or truncated
// ciphertext) -- the bottom output.
std::optional<Bytes> decrypt(const BoxKeyPair& keys, const Bytes& ciphertext);

Bytes sign_detached(const Bytes& sign_sk, const Bytes& message);

// False on a bad signature, malformed input, or wrong key -- never throws.
bool verify_detached(const Bytes& sign_pk, const Bytes& message,
                     const Bytes& signature);

// Report plaintext:
//   0x01 || u16 pk length || pk bytes || u16 dim || dim * f64 coordinates.
// The pk field is opaque to the codec (any length up to 65535).
Bytes encode_report(const Bytes& public_key, const Vector& report);

struct DecodedReport {
  Bytes public_key;
  Vector report;
};

// Throws CodecError (with byte position) on version mismatch, truncation,
// trailing bytes, or a non-finite coordinate.
DecodedReport decode_report(const Bytes& buf);

struct Envelope {
  Bytes ciphertext;
};

// Envelope wire format: 0x01 || u32 ciphertext length || ciphertext.
Bytes envelope_serialize(const Envelope& env);
Envelope envelope_deserialize(const Bytes& buf);

struct ShuffleResult {
  std::vector<Envelope> permuted;
  // (input index i, output position pi(i)) for every corrupted input; this
  // is the only part of the permutation the shuffler reveals.
  std::vector<std::pair<std::size_t, std::size_t>> leakage;
  // Shuffler-private realized permutation (pi(i) = permutation[i]); kept for
  // white-box verification, never copied into any transcript.
  std::vector<std::size_t> permutation;
};

// Uniform Fisher-Yates shuffle. `corrupted` holds input indices; duplicates
// are ignored, out-of-range indices throw std::out_of_range.
ShuffleResult shuffle_envelopes(const std::vector<Envelope>& envelopes,
                                const std::vector<std::size_t>& corrupted,
                                Rng& rng);

}  // namespace pic
