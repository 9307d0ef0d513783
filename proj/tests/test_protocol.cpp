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

#include <algorithm>
#include <cstring>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pic/protocol.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

pic::GroupSpec noiseless_group(int dim = 2) {
  return pic::GroupSpec{pic::make_mechanism("minkowski", kInf, dim)};
}

std::vector<std::vector<pic::UserState>> make_users(
    const std::vector<std::vector<pic::Vector>>& data) {
  std::vector<std::vector<pic::UserState>> users(data.size());
  for (std::size_t g = 0; g < data.size(); ++g) {
    for (const auto& x : data[g]) {
      pic::UserState u;
      u.group_index = static_cast<int>(g);
      u.data = x;
      users[g].push_back(std::move(u));
    }
  }
  return users;
}

bool bit_equal(const pic::Vector& a, const pic::Vector& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("server setup validates group specs") {
  pic::Rng rng(211);
  const auto setup = pic::server_setup({noiseless_group(), noiseless_group()},
                                       "identity", pic::EntropyMode::kSeeded,
                                       rng);
  CHECK(setup.params.group_specs.size() == 2);
  CHECK(setup.params.task_id == "identity");
  CHECK(setup.params.server_public_key.size() == pic::kBoxPublicKeyBytes);

  CHECK_THROWS_AS((void)pic::server_setup({}, "identity",
                                          pic::EntropyMode::kSeeded, rng),
                  std::invalid_argument);
  pic::GroupSpec bogus;
  bogus.mechanism.id = "bogus";
  CHECK_THROWS_AS((void)pic::server_setup({bogus}, "identity",
                                          pic::EntropyMode::kSeeded, rng),
                  std::invalid_argument);
  pic::GroupSpec baddim = noiseless_group();
  baddim.mechanism.dim = 0;
  CHECK_THROWS_AS((void)pic::server_setup({baddim}, "identity",
                                          pic::EntropyMode::kSeeded, rng),
                  std::invalid_argument);
}

TEST_CASE("user prepare seals a fresh pseudonymous report") {
  pic::Rng rng(223);
  const auto setup = pic::server_setup(
      {pic::GroupSpec{pic::make_mechanism("minkowski", 1.5, 2)}}, "identity",
      pic::EntropyMode::kSeeded, rng);
  pic::UserState u;
  u.group_index = 0;
  u.data = {0.3, -0.4};
  const auto env = pic::user_prepare(u, setup.params,
                                     pic::EntropyMode::kSeeded, rng);
  CHECK(u.has_keys);
  CHECK(u.pseudonym().size() == pic::kPseudonymBytes);

  const auto plain = pic::decrypt(setup.server_keys, env.ciphertext);
  REQUIRE(plain.has_value());
  const auto rep = pic::decode_report(*plain);
  CHECK(rep.public_key == u.pseudonym());
  const double expand =
      1.0 + setup.params.group_specs[0].mechanism.minkowski->radius;
  CHECK(pic::norm_linf(rep.report) <= expand + 1e-9);

  // Same data, second user: envelopes and pseudonyms must differ.
  pic::UserState v;
  v.group_index = 0;
  v.data = {0.3, -0.4};
  const auto env2 = pic::user_prepare(v, setup.params,
                                      pic::EntropyMode::kSeeded, rng);
  CHECK(env2.ciphertext != env.ciphertext);
  CHECK(v.pseudonym() != u.pseudonym());

  pic::UserState w;
  w.group_index = 0;
  w.data = {1.5, 0.0};  // outside the unit cube
  CHECK_THROWS_AS(
      (void)pic::user_prepare(w, setup.params, pic::EntropyMode::kSeeded, rng),
      std::invalid_argument);
  pic::UserState z;
  z.group_index = 0;
  z.data = {0.1, 0.2, 0.3};  // wrong dimension
  CHECK_THROWS_AS(
      (void)pic::user_prepare(z, setup.params, pic::EntropyMode::kSeeded, rng),
      std::invalid_argument);
}

TEST_CASE("identity round delivers every user its own report bit-exactly") {
  pic::Rng rng(227);
  const auto setup = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {-0.5, 0.75}, {1.0, -1.0}}});
  const auto res = pic::run_round(users, setup.params, setup.server_keys,
                                  pic::make_identity_task(), {{}},
                                  pic::EntropyMode::kSeeded, rng);
  REQUIRE(res.bulletin.size() == 1);
  CHECK(res.bulletin[0].size() == 3);
  CHECK(res.transcript.envelope_counts == std::vector<std::size_t>{3});
  CHECK(res.transcript.leakage[0].empty());
  CHECK_FALSE(res.transcript.detail_kept);
  CHECK(res.transcript.decoded.empty());
  CHECK(res.transcript.outputs.empty());

  std::size_t delivered = 0;
  for (auto& u : users[0]) {
    const auto payload = pic::user_retrieve(res.bulletin[0], u);
    const auto rep = pic::decode_report(payload);
    CHECK(rep.public_key == u.pseudonym());
    CHECK(bit_equal(rep.report, u.data));  // zero-noise randomizer
    CHECK(u.received_output.has_value());
    ++delivered;
  }
  CHECK(delivered == users[0].size());
}

TEST_CASE("noisy identity round stays in the expanded domain") {
  pic::Rng rng(229);
  const auto mech = pic::make_mechanism("minkowski", 1.0, 2);
  const auto setup = pic::server_setup({pic::GroupSpec{mech}}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.0, 0.0}, {0.9, 0.9}}});
  const auto res = pic::run_round(users, setup.params, setup.server_keys,
                                  pic::make_identity_task(), {{}},
                                  pic::EntropyMode::kSeeded, rng);
  const double expand = 1.0 + mech.minkowski->radius;
  for (auto& u : users[0]) {
    const auto rep = pic::decode_report(pic::user_retrieve(res.bulletin[0], u));
    CHECK(rep.public_key == u.pseudonym());
    CHECK(pic::norm_linf(rep.report) <= expand + 1e-9);
  }
}

TEST_CASE("pseudonyms are one-time: consecutive rounds are disjoint") {
  pic::Rng rng(233);
  const auto setup = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}}});
  (void)pic::run_round(users, setup.params, setup.server_keys,
                       pic::make_identity_task(), {{}},
                       pic::EntropyMode::kSeeded, rng);
  std::set<pic::Bytes> first;
  for (const auto& u : users[0]) first.insert(u.pseudonym());
  (void)pic::run_round(users, setup.params, setup.server_keys,
                       pic::make_identity_task(), {{}},
                       pic::EntropyMode::kSeeded, rng);
  for (const auto& u : users[0]) {
    CHECK(first.count(u.pseudonym()) == 0);
  }
}

TEST_CASE("transcript leakage covers corrupted indices only") {
  pic::Rng rng(239);
  const auto setup = pic::server_setup({noiseless_group(), noiseless_group()},
                                       "identity", pic::EntropyMode::kSeeded,
                                       rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}},
                           {{-0.1, -0.2}, {-0.3, -0.4}}});
  const auto res = pic::run_round(users, setup.params, setup.server_keys,
                                  pic::make_identity_task(), {{1}, {}},
                                  pic::EntropyMode::kSeeded, rng);
  REQUIRE(res.transcript.leakage.size() == 2);
  REQUIRE(res.transcript.leakage[0].size() == 1);
  CHECK(res.transcript.leakage[0][0].first == 1);
  CHECK(res.transcript.leakage[0][0].second < 3);
  CHECK(res.transcript.leakage[1].empty());
}

TEST_CASE("mismatched server keys abort the round") {
  pic::Rng rng(241);
  const auto setup = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  const auto other = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}}});
  try {
    (void)pic::run_round(users, setup.params, other.server_keys,
                         pic::make_identity_task(), {{}},
                         pic::EntropyMode::kSeeded, rng);
    FAIL("round with undecryptable envelopes did not abort");
  } catch (const pic::RoundAbortError& e) {
    CHECK(e.failing_count == 2);
  }
}

TEST_CASE("retrieval failures are typed") {
  pic::Rng rng(251);
  const auto setup = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}}});
  auto res = pic::run_round(users, setup.params, setup.server_keys,
                            pic::make_identity_task(), {{}},
                            pic::EntropyMode::kSeeded, rng);

  pic::UserState stranger;
  stranger.box_keys = pic::box_keygen(pic::EntropyMode::kSeeded, rng);
  stranger.sign_keys = pic::sign_keygen(pic::EntropyMode::kSeeded, rng);
  stranger.has_keys = true;
  CHECK_THROWS_AS((void)pic::user_retrieve(res.bulletin[0], stranger),
                  pic::DeliveryError);

  // Tamper with the target user's sealed output.
  auto& victim = users[0][0];
  for (auto& entry : res.bulletin[0]) {
    if (entry.public_key == victim.pseudonym()) {
      entry.encrypted_output[7] ^= 0x01;
    }
  }
  CHECK_THROWS_AS((void)pic::user_retrieve(res.bulletin[0], victim),
                  pic::IntegrityError);
}

TEST_CASE("task outputs must match the input shape") {
  pic::Rng rng(257);
  const auto setup = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}}});
  const pic::TaskFn short_task =
      [](const std::vector<std::vector<pic::DecodedReport>>& groups) {
        std::vector<std::vector<pic::Bytes>> out(groups.size());
        return out;  // wrong per-group count
      };
  CHECK_THROWS_AS(
      (void)pic::run_round(users, setup.params, setup.server_keys, short_task,
                           {{}}, pic::EntropyMode::kSeeded, rng),
      std::invalid_argument);
}

TEST_CASE("matched partners can message through the board") {
  pic::Rng rng(263);
  const auto setup = pic::server_setup({noiseless_group()}, "swap",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}}});
  // f = swap: each position receives its partner's (pseudonym, report).
  const pic::TaskFn swap_task =
      [](const std::vector<std::vector<pic::DecodedReport>>& groups) {
        std::vector<std::vector<pic::Bytes>> out(groups.size());
        for (std::size_t g = 0; g < groups.size(); ++g) {
          const auto& grp = groups[g];
          for (std::size_t i = 0; i < grp.size(); ++i) {
            const auto& partner = grp[i ^ 1];
            out[g].push_back(
                pic::encode_task_payload(std::vector<pic::DecodedReport>{
                    partner}));
          }
        }
        return out;
      };
  const auto res = pic::run_round(users, setup.params, setup.server_keys,
                                  swap_task, {{}}, pic::EntropyMode::kSeeded,
                                  rng);
  auto& alice = users[0][0];
  auto& bob = users[0][1];
  const auto alice_sees =
      pic::decode_task_payload(pic::user_retrieve(res.bulletin[0], alice));
  REQUIRE(alice_sees.size() == 1);
  CHECK(alice_sees[0].public_key == bob.pseudonym());

  pic::MessageBoard board;
  const pic::Bytes hello{'h', 'i'};
  pic::post_message_send(alice, alice_sees[0].public_key, hello, board);
  REQUIRE(board.size() == 1);

  const auto got = pic::post_message_receive(board, bob);
  CHECK(got.dropped == 0);
  REQUIRE(got.messages.size() == 1);
  CHECK(got.messages[0].first == alice.pseudonym());
  CHECK(got.messages[0].second == hello);

  // A third party can neither see an addressed message nor decrypt it.
  pic::UserState carol;
  carol.box_keys = pic::box_keygen(pic::EntropyMode::kSeeded, rng);
  carol.sign_keys = pic::sign_keygen(pic::EntropyMode::kSeeded, rng);
  carol.has_keys = true;
  const auto other = pic::post_message_receive(board, carol);
  CHECK(other.messages.empty());
  CHECK(other.dropped == 0);
  CHECK_FALSE(pic::decrypt(carol.box_keys, board[0].ciphertext).has_value());

  // A forged signature is dropped and counted.
  auto forged = board;
  forged[0].signature[3] ^= 0x40;
  const auto bad = pic::post_message_receive(forged, bob);
  CHECK(bad.messages.empty());
  CHECK(bad.dropped == 1);
}

TEST_CASE("task payload codec") {
  pic::Rng rng(269);
  std::vector<pic::DecodedReport> items;
  items.push_back({pic::Bytes(64, 0x01), {0.25, -0.75}});
  items.push_back({pic::Bytes(64, 0x02), {1.0, 1.0}});
  const auto buf = pic::encode_task_payload(items);
  const auto back = pic::decode_task_payload(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[0].public_key == items[0].public_key);
  CHECK(bit_equal(back[1].report, items[1].report));

  auto bad = buf;
  bad.pop_back();
  CHECK_THROWS_AS((void)pic::decode_task_payload(bad), pic::CodecError);
  bad = buf;
  bad[0] = 0x09;
  CHECK_THROWS_AS((void)pic::decode_task_payload(bad), pic::CodecError);

  CHECK(pic::decode_task_payload(pic::encode_task_payload({})).empty());
}

TEST_CASE("detail retention is opt-in") {
  pic::Rng rng(271);
  const auto setup = pic::server_setup({noiseless_group()}, "identity",
                                       pic::EntropyMode::kSeeded, rng);
  auto users = make_users({{{0.1, 0.2}, {0.3, 0.4}}});
  const auto res = pic::run_round(users, setup.params, setup.server_keys,
                                  pic::make_identity_task(), {{}},
                                  pic::EntropyMode::kSeeded, rng,
                                  /*keep_detail=*/true);
  CHECK(res.transcript.detail_kept);
  REQUIRE(res.transcript.decoded.size() == 1);
  CHECK(res.transcript.decoded[0].size() == 2);
  REQUIRE(res.transcript.outputs.size() == 1);
  CHECK(res.transcript.outputs[0].size() == 2);
}

}  // TEST_SUITE
