/*
 * crypto_test.cpp
 *
 * This source file is part of the MOI payment protocol project
 *
 * Copyright 2026 The MOI project authors
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

#include <gtest/gtest.h>

#include <set>

#include "moi/base85.hpp"
#include "moi/crypto.hpp"
#include "moi/wire.hpp"
#include "test_support.hpp"

namespace moi {
namespace {

using testing::keypair;

template <std::size_t N>
ByteArray<N> array_from_hex(std::string_view hex) {
  auto bytes = from_hex(hex);
  EXPECT_TRUE(bytes && bytes->size() == N);
  ByteArray<N> out{};
  if (bytes) std::copy_n(bytes->begin(), std::min(N, bytes->size()), out.begin());
  return out;
}

Bytes text_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

TEST(Keys, SeededGenerationIsDeterministic) {
  const KeyPair a = keypair(42);
  const KeyPair b = keypair(42);
  const KeyPair c = keypair(43);
  EXPECT_EQ(a.secret, b.secret);
  EXPECT_EQ(a.public_key, b.public_key);
  EXPECT_NE(a.public_key, c.public_key);
  EXPECT_TRUE(is_valid_public_key(a.public_key));
  EXPECT_EQ(derive_public_key(a.secret), a.public_key);
}

TEST(Keys, HundredGenerationsGiveDistinctIds) {
  SeededRandom rng(1);
  std::set<AccountId> ids;
  for (int i = 0; i < 100; ++i) {
    const KeyPair pair = generate_keypair(rng);
    EXPECT_TRUE(is_valid_public_key(pair.public_key));
    ids.insert(pair.id());
  }
  EXPECT_EQ(ids.size(), 100u);
}

TEST(Keys, AccountIdIsKeySuffix) {
  const KeyPair pair = keypair(5);
  const AccountId id = derive_account_id(pair.public_key);
  EXPECT_TRUE(std::equal(id.bytes.begin(), id.bytes.end(), pair.public_key.bytes.begin() + 124));
  PublicKey zero_tail = pair.public_key;
  std::fill(zero_tail.bytes.end() - 8, zero_tail.bytes.end(), 0);
  EXPECT_EQ(derive_account_id(zero_tail), AccountId{});
}

TEST(Keys, RejectsPointsOffTheCurve) {
  PublicKey key = keypair(6).public_key;
  EXPECT_TRUE(is_valid_public_key(key));
  key.bytes[131] ^= 1;
  EXPECT_FALSE(is_valid_public_key(key));
  EXPECT_FALSE(is_valid_public_key(PublicKey{}));
  PublicKey too_wide{};
  too_wide.bytes.fill(0xFF);
  EXPECT_FALSE(is_valid_public_key(too_wide));
}

// RFC 6979 appendix A.2.7 (P-521, SHA-256, message "sample").
TEST(Signatures, MatchesDeterministicEcdsaReferenceVector) {
  PrivateKey secret;
  secret.scalar = array_from_hex<66>(
      "00fad06daa62ba3b25d2fb40133da757205de67f5bb0018fee8c86e1b68c7e75ca"
      "a896eb32f1f47c70855836a6d16fcc1466f6d8fbec67db89ec0c08b0e996b83538");
  const PublicKey expected_key{array_from_hex<132>(
      "01894550d0785932e00eaa23b694f213f8c3121f86dc97a04e5a7167db4e5bcd37"
      "1123d46e45db6b5d5370a7f20fb633155d38ffa16d2bd761dcac474b9a2f5023a4"
      "00493101c962cd4d2fddf782285e64584139c2f91b47f87ff82354d6630f746a28"
      "a0db25741b5b34a828008b22acc23f924faafbd4d33f81ea66956dfeaa2bfdfcf5")};
  const Signature expected_sig{array_from_hex<132>(
      "01511bb4d675114fe266fc4372b87682baecc01d3cc62cf2303c92b3526012659d"
      "16876e25c7c1e57648f23b73564d67f61c6f14d527d54972810421e7d87589e1a7"
      "004a171143a83163d6df460aaf61522695f207a58b95c0644d87e52aa1a347916e"
      "4f7a72930b1bc06dbe22ce3f58264afd23704cbb63b29b931f7de6c9d949a7ecfc")};

  EXPECT_EQ(derive_public_key(secret), expected_key);
  const Signature sig = sign(secret, text_bytes("sample"));
  EXPECT_EQ(sig, expected_sig);
  EXPECT_TRUE(verify(expected_key, text_bytes("sample"), sig));
  EXPECT_FALSE(verify(expected_key, text_bytes("samplf"), sig));
}

TEST(Signatures, DeterministicAndFixedWidth) {
  const KeyPair pair = keypair(7);
  const Bytes payload(24, 0x33);
  const Signature a = sign(pair.secret, payload);
  const Signature b = sign(pair.secret, payload);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.bytes.size(), 132u);
  EXPECT_TRUE(verify(pair.public_key, payload, a));
}

TEST(Signatures, RoundTripOverPayloadLengths) {
  const KeyPair pair = keypair(8);
  std::mt19937_64 rng(8);
  for (std::size_t len = 24; len <= 84; len += 4) {
    Bytes payload(len);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
    EXPECT_TRUE(verify(pair.public_key, payload, sign(pair.secret, payload))) << len;
  }
}

TEST(Signatures, SingleBitTamperingFails) {
  const KeyPair pair = keypair(9);
  std::mt19937_64 rng(9);
  Bytes payload(24);
  for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
  const Signature sig = sign(pair.secret, payload);
  for (int i = 0; i < 40; ++i) {
    Bytes p = payload;
    p[rng() % p.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    EXPECT_FALSE(verify(pair.public_key, p, sig));

    Signature s = sig;
    s.bytes[rng() % s.bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    EXPECT_FALSE(verify(pair.public_key, payload, s));

    PublicKey k = pair.public_key;
    k.bytes[rng() % k.bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    EXPECT_FALSE(verify(k, payload, sig));
  }
}

TEST(Signatures, MalformedInputsAreFalseNotErrors) {
  const KeyPair pair = keypair(10);
  const Bytes payload(24, 1);
  EXPECT_FALSE(verify(pair.public_key, payload, Signature{}));
  Signature max{};
  max.bytes.fill(0xFF);
  EXPECT_FALSE(verify(pair.public_key, payload, max));
  EXPECT_FALSE(verify(PublicKey{}, payload, sign(pair.secret, payload)));
}

TEST(Signatures, TransactionAndCertificateHelpers) {
  const KeyPair alice = keypair(11);
  const KeyPair bob = keypair(12);
  Transaction tx = testing::make_check(alice, bob.id(), 1234, testing::t0(), kCurrencyEur, "hi");
  EXPECT_TRUE(verify_transaction(tx, alice.public_key));
  EXPECT_FALSE(verify_transaction(tx, bob.public_key));
  tx.amount.cents += 1;
  EXPECT_FALSE(verify_transaction(tx, alice.public_key));

  const testing::World world;
  Certificate cert = world.certify(alice.id(), 1);
  EXPECT_TRUE(verify_certificate(cert, world.authority.public_key));
  cert.debt_kilo = 2;
  EXPECT_FALSE(verify_certificate(cert, world.authority.public_key));
}

TEST(MasterAuthority, EmbeddedKeyDerivesItsId) {
  const MasterAuthority& ma = master_authority_v01();
  EXPECT_EQ(ma.id.to_u64(), 0x42DB8CD275A019E9u);
  EXPECT_EQ(derive_account_id(ma.public_key), ma.id);
  EXPECT_TRUE(is_valid_public_key(ma.public_key));
  EXPECT_EQ(to_hex(ma.public_key.bytes).substr(0, 16), "01dc93f09a28deb3");
  ASSERT_TRUE(master_authority_for(kVersion01));
  EXPECT_FALSE(master_authority_for(kVersion10));
}

TEST(MasterAuthority, MatchesPrintedCoordinatePrefixes) {
  const auto& key = master_authority_v01().public_key.bytes;
  const std::string x = base85_encode(ByteView(key.data(), 66), Base85Alphabet::rfc1924);
  const std::string y = base85_encode(ByteView(key.data() + 66, 66), Base85Alphabet::rfc1924);
  const std::string printed_x = "0o;@Dnke406Ks)?ZJ}hg>~!A1ceYz@3V5;|u{w}LYCcPrxRm7@j0R";
  const std::string printed_y = "0o+RoE>hbz;Yrc0dCjBO(on?P2_B12G8p*NLr4m8Kb";
  EXPECT_EQ(x.substr(0, printed_x.size()), printed_x);
  EXPECT_EQ(y.substr(0, printed_y.size()), printed_y);
}

TEST(Vanity, AlwaysTrueReturnsFirstCandidate) {
  SeededRandom rng(20);
  std::size_t used = 0;
  auto pair = vanity_search([](std::string_view) { return true; }, 10, rng, &used);
  ASSERT_TRUE(pair);
  EXPECT_EQ(used, 1u);
}

TEST(Vanity, AlwaysFalseIsExhausted) {
  SeededRandom rng(21);
  std::size_t used = 0;
  EXPECT_FALSE(vanity_search([](std::string_view) { return false; }, 10, rng, &used));
  EXPECT_EQ(used, 10u);
}

TEST(Vanity, AlphanumericIdIsFound) {
  // 62 of 85 symbols are alphanumeric: about 4.3% of ids qualify.
  SeededRandom rng(22);
  auto pair = vanity_search(is_alphanumeric_id, 100'000, rng);
  ASSERT_TRUE(pair);
  EXPECT_TRUE(is_alphanumeric_id(account_id_to_text(pair->id())));
  EXPECT_TRUE(is_alphanumeric_id("HelloWorld"));
  EXPECT_FALSE(is_alphanumeric_id("Hello.orld"));
}

TEST(Random, SeededStreamIsReproducibleAcrossChunking) {
  SeededRandom a(99);
  SeededRandom b(99);
  ByteArray<100> whole{};
  a.fill(whole);
  ByteArray<100> pieces{};
  b.fill(std::span(pieces).subspan(0, 7));
  b.fill(std::span(pieces).subspan(7, 60));
  b.fill(std::span(pieces).subspan(67));
  EXPECT_EQ(whole, pieces);
}

}  // namespace
}  // namespace moi
