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

#include "pic/envelope.hpp"

#include <sodium.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

namespace pic {

namespace {

constexpr std::uint8_t kReportVersion = 0x01;
constexpr std::uint8_t kEnvelopeVersion = 0x01;

void fill_seed_from_rng(unsigned char* seed, std::size_t len, Rng& rng) {
  std::size_t off = 0;
  while (off < len) {
    const std::uint64_t word = rng();
    for (int k = 0; k < 8 && off < len; ++k, ++off) {
      seed[off] = static_cast<unsigned char>((word >> (8 * k)) & 0xff);
    }
  }
}

void check_key(const Bytes& key, std::size_t expected, const char* what) {
  if (key.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": wrong key size");
  }
}

}  // namespace

void crypto_init() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

BoxKeyPair box_keygen(EntropyMode mode, Rng& rng) {
  crypto_init();
  BoxKeyPair kp;
  kp.public_key.resize(crypto_box_PUBLICKEYBYTES);
  kp.secret_key.resize(crypto_box_SECRETKEYBYTES);
  if (mode == EntropyMode::kSeeded) {
    unsigned char seed[crypto_box_SEEDBYTES];
    fill_seed_from_rng(seed, sizeof(seed), rng);
    crypto_box_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed);
    sodium_memzero(seed, sizeof(seed));
  } else {
    crypto_box_keypair(kp.public_key.data(), kp.secret_key.data());
  }
  return kp;
}

SignKeyPair sign_keygen(EntropyMode mode, Rng& rng) {
  crypto_init();
  SignKeyPair kp;
  kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
  if (mode == EntropyMode::kSeeded) {
    unsigned char seed[crypto_sign_SEEDBYTES];
    fill_seed_from_rng(seed, sizeof(seed), rng);
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed);
    sodium_memzero(seed, sizeof(seed));
  } else {
    crypto_sign_keypair(kp.public_key.data(), kp.secret_key.data());
  }
  return kp;
}

Bytes encrypt(const Bytes& recipient_pk, const Bytes& plaintext) {
  crypto_init();
  check_key(recipient_pk, kBoxPublicKeyBytes, "encrypt");
  if (plaintext.size() > kMaxPlaintextBytes) {
    throw std::invalid_argument("encrypt: plaintext over 64 KiB");
  }
  Bytes ct(plaintext.size() + crypto_box_SEALBYTES);
  if (crypto_box_seal(ct.data(), plaintext.data(), plaintext.size(),
                      recipient_pk.data()) != 0) {
    throw std::runtime_error("encrypt: seal failed");
  }
  return ct;
}

std::optional<Bytes> decrypt(const BoxKeyPair& keys, const Bytes& ciphertext) {
  crypto_init();
  check_key(keys.public_key, kBoxPublicKeyBytes, "decrypt");
  check_key(keys.secret_key, kBoxSecretKeyBytes, "decrypt");
  if (ciphertext.size() < crypto_box_SEALBYTES) return std::nullopt;
  Bytes pt(ciphertext.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(pt.data(), ciphertext.data(), ciphertext.size(),
                           keys.public_key.data(),
                           keys.secret_key.data()) != 0) {
    return std::nullopt;
  }
  return pt;
}

Bytes sign_detached(const Bytes& sign_sk, const Bytes& message) {
  crypto_init();
  check_key(sign_sk, kSignSecretKeyBytes, "sign");
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       sign_sk.data());
  return sig;
}

bool verify_detached(const Bytes& sign_pk, const Bytes& message,
                     const Bytes& signature) {
  crypto_init();
  if (sign_pk.size() != kSignPublicKeyBytes ||
      signature.size() != kSignatureBytes) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(),
                                     message.size(), sign_pk.data()) == 0;
}

Bytes encode_report(const Bytes& public_key, const Vector& report) {
  if (public_key.size() > 0xffff) {
    throw std::invalid_argument("encode_report: key too long");
  }
  if (report.size() > 0xffff) {
    throw std::invalid_argument("encode_report: dimension too large");
  }
  for (double v : report) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("encode_report: non-finite coordinate");
    }
  }
  Bytes out;
  out.reserve(1 + 2 + public_key.size() + 2 + 8 * report.size());
  out.push_back(kReportVersion);
  put_u16be(out, static_cast<std::uint16_t>(public_key.size()));
  out.insert(out.end(), public_key.begin(), public_key.end());
  put_u16be(out, static_cast<std::uint16_t>(report.size()));
  for (double v : report) put_f64be(out, v);
  return out;
}

DecodedReport decode_report(const Bytes& buf) {
  ByteReader r(buf);
  const std::size_t vpos = r.position();
  const std::uint8_t version = r.get_u8("report version");
  if (version != kReportVersion) {
    throw CodecError("unsupported report version", vpos);
  }
  DecodedReport out;
  const std::uint16_t pk_len = r.get_u16be("key length");
  out.public_key = r.get_bytes(pk_len, "key bytes");
  const std::uint16_t dim = r.get_u16be("dimension");
  out.report.resize(dim);
  for (std::uint16_t k = 0; k < dim; ++k) {
    const std::size_t cpos = r.position();
    out.report[k] = r.get_f64be("coordinate");
    if (!std::isfinite(out.report[k])) {
      throw CodecError("non-finite coordinate", cpos);
    }
  }
  r.expect_end("report");
  return out;
}

Bytes envelope_serialize(const Envelope& env) {
  if (env.ciphertext.size() > 0xffffffffu) {
    throw std::invalid_argument("envelope_serialize: ciphertext too long");
  }
  Bytes out;
  out.reserve(5 + env.ciphertext.size());
  out.push_back(kEnvelopeVersion);
  put_u32be(out, static_cast<std::uint32_t>(env.ciphertext.size()));
  out.insert(out.end(), env.ciphertext.begin(), env.ciphertext.end());
  return out;
}

Envelope envelope_deserialize(const Bytes& buf) {
  ByteReader r(buf);
  const std::size_t vpos = r.position();
  const std::uint8_t version = r.get_u8("envelope version");
  if (version != kEnvelopeVersion) {
    throw CodecError("unsupported envelope version", vpos);
  }
  const std::uint32_t len = r.get_u32be("ciphertext length");
  Envelope env;
  env.ciphertext = r.get_bytes(len, "ciphertext");
  r.expect_end("envelope");
  return env;
}

ShuffleResult shuffle_envelopes(const std::vector<Envelope>& envelopes,
                                const std::vector<std::size_t>& corrupted,
                                Rng& rng) {
  const std::size_t n = envelopes.size();
  for (std::size_t c : corrupted) {
    if (c >= n) throw std::out_of_range("shuffle: corrupted index out of range");
  }
  // source[pos] = input index placed at output position pos.
  std::vector<std::size_t> source(n);
  for (std::size_t i = 0; i < n; ++i) source[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(source[i - 1], source[pick(rng)]);
  }
  ShuffleResult out;
  out.permuted.reserve(n);
  out.permutation.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    out.permuted.push_back(envelopes[source[pos]]);
    out.permutation[source[pos]] = pos;
  }
  const std::set<std::size_t> uniq(corrupted.begin(), corrupted.end());
  for (std::size_t c : uniq) out.leakage.emplace_back(c, out.permutation[c]);
  return out;
}

}  // namespace pic
