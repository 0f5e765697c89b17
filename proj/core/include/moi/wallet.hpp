/*
 * wallet.hpp
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moi/crypto.hpp"
#include "moi/wire.hpp"

namespace moi {

class WalletError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One identity. The private scalar is only held encrypted
/// (PBKDF2-HMAC-SHA256 key, AES-256-GCM, label and public key bound as
/// associated data).
struct WalletIdentity {
  std::string label;
  PublicKey public_key;
  std::uint32_t kdf_iterations = 0;
  Bytes salt;
  Bytes nonce;
  Bytes ciphertext;
  Bytes tag;

  AccountId id() const { return derive_account_id(public_key); }
};

/// Signed but unpublished check kept for recovering a lost device.
struct RecoveryCheck {
  std::string label;
  std::string text;  // base85 transaction
};

inline constexpr std::uint32_t kDefaultKdfIterations = 200'000;

class Wallet {
 public:
  /// Missing file gives an empty wallet.
  static Wallet load(const std::filesystem::path& path);
  /// Writes to a temporary file and renames it into place.
  void save(const std::filesystem::path& path) const;

  static Wallet from_json(std::string_view text);
  std::string to_json() const;

  const std::vector<WalletIdentity>& identities() const { return identities_; }
  const WalletIdentity* find(std::string_view label) const;
  /// Looks an identity up by label, base85 id or hex id.
  const WalletIdentity* resolve(std::string_view label_or_id) const;

  const WalletIdentity& add_identity(std::string label, const KeyPair& pair,
                                     std::string_view passphrase,
                                     std::uint32_t kdf_iterations = kDefaultKdfIterations);
  /// Throws WalletError for an unknown label or a wrong passphrase.
  PrivateKey unlock(std::string_view label, std::string_view passphrase) const;

  void add_recovery_check(std::string label, const Transaction& tx);
  const std::vector<RecoveryCheck>& recovery_checks() const { return recovery_checks_; }

 private:
  std::vector<WalletIdentity> identities_;
  std::vector<RecoveryCheck> recovery_checks_;
};

/// Exclusive advisory lock on `<wallet>.lock`, held for one command.
class WalletLock {
 public:
  explicit WalletLock(const std::filesystem::path& wallet_path);
  ~WalletLock();
  WalletLock(const WalletLock&) = delete;
  WalletLock& operator=(const WalletLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace moi
