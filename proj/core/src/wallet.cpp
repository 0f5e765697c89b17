/*
 * wallet.cpp
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

#include "moi/wallet.hpp"

#include <fcntl.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <json.hpp>
#include <memory>

#include "moi/base85.hpp"

namespace moi {

namespace {

using json = nlohmann::json;

constexpr std::size_t kSaltSize = 16;
constexpr std::size_t kNonceSize = 12;
constexpr std::size_t kTagSize = 16;
constexpr int kWalletFormat = 1;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

struct Key256 {
  ByteArray<32> bytes{};
  ~Key256() { OPENSSL_cleanse(bytes.data(), bytes.size()); }
};

void derive_key(std::string_view passphrase, ByteView salt, std::uint32_t iterations, Key256& key) {
  if (PKCS5_PBKDF2_HMAC(passphrase.data(), static_cast<int>(passphrase.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(iterations), EVP_sha256(),
                        static_cast<int>(key.bytes.size()), key.bytes.data()) != 1) {
    throw WalletError("key derivation failed");
  }
}

Bytes associated_data(const WalletIdentity& id) {
  Bytes aad(id.label.begin(), id.label.end());
  aad.push_back(0);
  aad.insert(aad.end(), id.public_key.bytes.begin(), id.public_key.bytes.end());
  return aad;
}

std::string b85(ByteView data) { return base85_encode(data); }

Bytes from_b85(const json& j, const char* field, std::size_t size) {
  Bytes raw = base85_decode(j.at(field).get<std::string>());
  if (raw.size() < size) throw WalletError(std::string("wallet field too short: ") + field);
  raw.resize(size);
  return raw;
}

}  // namespace

const WalletIdentity* Wallet::find(std::string_view label) const {
  for (const auto& id : identities_) {
    if (id.label == label) return &id;
  }
  return nullptr;
}

const WalletIdentity* Wallet::resolve(std::string_view label_or_id) const {
  if (const auto* by_label = find(label_or_id)) return by_label;
  try {
    const AccountId wanted = account_id_from_text(label_or_id);
    for (const auto& id : identities_) {
      if (id.id() == wanted) return &id;
    }
  } catch (const CodecError&) {
  }
  return nullptr;
}

const WalletIdentity& Wallet::add_identity(std::string label, const KeyPair& pair,
                                           std::string_view passphrase,
                                           std::uint32_t kdf_iterations) {
  if (label.empty()) throw WalletError("identity label must not be empty");
  if (find(label)) throw WalletError("identity '" + label + "' already exists");
  if (passphrase.empty()) throw WalletError("an empty passphrase is not allowed");

  WalletIdentity id;
  id.label = std::move(label);
  id.public_key = pair.public_key;
  id.kdf_iterations = kdf_iterations;
  id.salt.resize(kSaltSize);
  id.nonce.resize(kNonceSize);
  SystemRandom rng;
  rng.fill(id.salt);
  rng.fill(id.nonce);

  Key256 key;
  derive_key(passphrase, id.salt, kdf_iterations, key);
  const Bytes aad = associated_data(id);

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  id.ciphertext.resize(kScalarSize);
  id.tag.resize(kTagSize);
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes.data(), id.nonce.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1 ||
      EVP_EncryptUpdate(ctx.get(), id.ciphertext.data(), &len, pair.secret.scalar.data(),
                        static_cast<int>(kScalarSize)) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), id.ciphertext.data() + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize, id.tag.data()) != 1) {
    throw WalletError("encryption failed");
  }
  identities_.push_back(std::move(id));
  return identities_.back();
}

PrivateKey Wallet::unlock(std::string_view label, std::string_view passphrase) const {
  const WalletIdentity* id = find(label);
  if (!id) throw WalletError("no identity labelled '" + std::string(label) + "'");

  Key256 key;
  derive_key(passphrase, id->salt, id->kdf_iterations, key);
  const Bytes aad = associated_data(*id);
  PrivateKey secret;
  Bytes tag = id->tag;
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  const bool ok =
      ctx && EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) == 1 &&
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes.data(), id->nonce.data()) == 1 &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) == 1 &&
      EVP_DecryptUpdate(ctx.get(), secret.scalar.data(), &len, id->ciphertext.data(),
                        static_cast<int>(id->ciphertext.size())) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()) == 1 &&
      EVP_DecryptFinal_ex(ctx.get(), secret.scalar.data() + len, &len) == 1;
  if (!ok) throw WalletError("wrong passphrase or corrupted wallet entry");
  return secret;
}

void Wallet::add_recovery_check(std::string label, const Transaction& tx) {
  recovery_checks_.push_back({std::move(label), transaction_to_text(tx)});
}

std::string Wallet::to_json() const {
  json root;
  root["format"] = kWalletFormat;
  root["identities"] = json::array();
  for (const auto& id : identities_) {
    root["identities"].push_back({
        {"label", id.label},
        {"account_id", account_id_to_text(id.id())},
        {"public_key", public_key_to_text(id.public_key)},
        {"kdf", "pbkdf2-hmac-sha256"},
        {"kdf_iterations", id.kdf_iterations},
        {"salt", b85(id.salt)},
        {"nonce", b85(id.nonce)},
        {"cipher", "aes-256-gcm"},
        // 66-byte ciphertext, zero-padded to a base85 word boundary.
        {"encrypted_scalar", b85(id.ciphertext)},
        {"tag", b85(id.tag)},
    });
  }
  root["recovery_checks"] = json::array();
  for (const auto& check : recovery_checks_) {
    root["recovery_checks"].push_back({{"label", check.label}, {"check", check.text}});
  }
  return root.dump(2) + "\n";
}

Wallet Wallet::from_json(std::string_view text) {
  Wallet wallet;
  try {
    const json root = json::parse(text);
    if (root.value("format", 0) != kWalletFormat) throw WalletError("unsupported wallet format");
    for (const auto& j : root.at("identities")) {
      WalletIdentity id;
      id.label = j.at("label").get<std::string>();
      id.public_key = public_key_from_text(j.at("public_key").get<std::string>());
      id.kdf_iterations = j.at("kdf_iterations").get<std::uint32_t>();
      id.salt = from_b85(j, "salt", kSaltSize);
      id.nonce = from_b85(j, "nonce", kNonceSize);
      id.ciphertext = from_b85(j, "encrypted_scalar", kScalarSize);
      id.tag = from_b85(j, "tag", kTagSize);
      wallet.identities_.push_back(std::move(id));
    }
    for (const auto& j : root.at("recovery_checks")) {
      wallet.recovery_checks_.push_back(
          {j.at("label").get<std::string>(), j.at("check").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw WalletError(std::string("malformed wallet: ") + e.what());
  } catch (const CodecError& e) {
    throw WalletError(std::string("malformed wallet: ") + e.what());
  }
  return wallet;
}

Wallet Wallet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

void Wallet::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << to_json();
    if (!out) throw WalletError("cannot write " + tmp.string());
  }
  std::filesystem::permissions(tmp, std::filesystem::perms::owner_read |
                                        std::filesystem::perms::owner_write);
  std::filesystem::rename(tmp, path);
}

WalletLock::WalletLock(const std::filesystem::path& wallet_path) {
  auto lock_path = wallet_path;
  lock_path += ".lock";
  if (lock_path.has_parent_path()) std::filesystem::create_directories(lock_path.parent_path());
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0) throw WalletError("cannot open lock file " + lock_path.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw WalletError("cannot lock " + lock_path.string());
  }
}

WalletLock::~WalletLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace moi
