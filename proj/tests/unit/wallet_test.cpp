/*
 * wallet_test.cpp
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

#include <filesystem>
#include <fstream>
#include <sys/stat.h>

#include "moi/base85.hpp"
#include "moi/wallet.hpp"
#include "test_support.hpp"

namespace moi {
namespace {

namespace fs = std::filesystem;
using testing::keypair;

constexpr std::uint32_t kFastKdf = 1000;

fs::path temp_wallet() {
  const auto dir = fs::temp_directory_path() /
                   ("moi-wallet-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir / "wallet.json";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Wallet, MissingFileIsEmpty) {
  const auto path = temp_wallet();
  EXPECT_TRUE(Wallet::load(path).identities().empty());
}

TEST(Wallet, SaveLoadUnlockRoundTrip) {
  const auto path = temp_wallet();
  const KeyPair main = keypair(1);
  const KeyPair spare = keypair(2);
  {
    Wallet w;
    w.add_identity("main", main, "correct horse", kFastKdf);
    w.add_identity("spare", spare, "battery staple", kFastKdf);
    w.save(path);
  }
  const Wallet w = Wallet::load(path);
  ASSERT_EQ(w.identities().size(), 2u);
  EXPECT_EQ(w.find("main")->public_key, main.public_key);
  EXPECT_EQ(w.unlock("main", "correct horse"), main.secret);
  EXPECT_EQ(w.unlock("spare", "battery staple"), spare.secret);
  EXPECT_THROW(w.unlock("main", "wrong"), WalletError);
  EXPECT_THROW(w.unlock("nobody", "correct horse"), WalletError);
  EXPECT_EQ(w.resolve(account_id_to_text(main.id())), w.find("main"));
  EXPECT_EQ(w.resolve(main.id().hex()), w.find("main"));
  EXPECT_EQ(w.resolve("absent"), nullptr);

  struct stat st {};
  ASSERT_EQ(::stat(path.c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600);
}

TEST(Wallet, DuplicateLabelIsRefused) {
  Wallet w;
  w.add_identity("main", keypair(1), "pw", kFastKdf);
  EXPECT_THROW(w.add_identity("main", keypair(2), "pw", kFastKdf), WalletError);
}

TEST(Wallet, FileNeverContainsPlaintextScalar) {
  const auto path = temp_wallet();
  const KeyPair pair = keypair(3);
  Wallet w;
  w.add_identity("main", pair, "pw", kFastKdf);
  w.save(path);
  const std::string text = read_file(path);
  const ByteView scalar(pair.secret.scalar);
  for (auto alphabet : {Base85Alphabet::z85, Base85Alphabet::rfc1924}) {
    EXPECT_EQ(text.find(base85_encode(scalar, alphabet)), std::string::npos);
  }
  EXPECT_EQ(text.find(to_hex(scalar)), std::string::npos);
  // Trailing 16 significant bytes in any of the plain renderings.
  const Bytes tail(pair.secret.scalar.end() - 16, pair.secret.scalar.end());
  EXPECT_EQ(text.find(to_hex(tail)), std::string::npos);
  EXPECT_EQ(text.find(std::string(tail.begin(), tail.end())), std::string::npos);
  EXPECT_EQ(text.find(base85_encode(tail)), std::string::npos);
}

TEST(Wallet, TamperedCiphertextFailsAuthentication) {
  Wallet w;
  w.add_identity("main", keypair(4), "pw", kFastKdf);
  std::string json = w.to_json();
  Wallet reparsed = Wallet::from_json(json);
  EXPECT_NO_THROW(reparsed.unlock("main", "pw"));

  // Swap the public key: associated data no longer matches.
  const std::string original = public_key_to_text(keypair(4).public_key);
  const std::string other = public_key_to_text(keypair(5).public_key);
  const auto pos = json.find(original);
  ASSERT_NE(pos, std::string::npos);
  json.replace(pos, original.size(), other);
  EXPECT_THROW(Wallet::from_json(json).unlock("main", "pw"), WalletError);
}

TEST(Wallet, RecoveryChecksPersist) {
  const auto path = temp_wallet();
  const KeyPair owner = keypair(6);
  const Transaction tx = testing::make_check(owner, keypair(7).id(), 100'000, testing::at(0));
  {
    Wallet w;
    w.add_identity("main", owner, "pw", kFastKdf);
    w.add_recovery_check("trustee", tx);
    w.save(path);
  }
  const Wallet w = Wallet::load(path);
  ASSERT_EQ(w.recovery_checks().size(), 1u);
  EXPECT_EQ(w.recovery_checks()[0].label, "trustee");
  EXPECT_EQ(transaction_from_text(w.recovery_checks()[0].text), tx);
}

TEST(Wallet, MalformedJsonIsAWalletError) {
  EXPECT_THROW(Wallet::from_json("{"), WalletError);
  EXPECT_THROW(Wallet::from_json(R"({"identities": [{"label": 3}]})"), WalletError);
}

TEST(WalletLock, IsReentrantAcrossSequentialCommands) {
  const auto path = temp_wallet();
  { WalletLock lock(path); }
  { WalletLock lock(path); }
  EXPECT_TRUE(fs::exists(path.string() + ".lock"));
}

}  // namespace
}  // namespace moi
