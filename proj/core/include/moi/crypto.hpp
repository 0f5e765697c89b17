/*
 * crypto.hpp
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
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "moi/types.hpp"
#include "moi/wire.hpp"

namespace moi {

inline constexpr std::size_t kScalarSize = 66;

/// Source of key material. Key generation takes an exclusive handle.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  /// Throws std::runtime_error when the source cannot deliver.
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Operating system CSPRNG (via OpenSSL).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Reproducible stream for tests and simulations: SHA-256 over
/// (seed, block counter). Not for real keys.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : seed_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  ByteArray<32> block_{};
  std::size_t used_ = 32;
};

/// P-521 scalar, big-endian. Wiped on destruction.
struct PrivateKey {
  ByteArray<kScalarSize> scalar{};

  PrivateKey() = default;
  PrivateKey(const PrivateKey&) = default;
  PrivateKey& operator=(const PrivateKey&) = default;
  ~PrivateKey();

  bool operator==(const PrivateKey&) const = default;
};

struct KeyPair {
  PrivateKey secret;
  PublicKey public_key;

  AccountId id() const;
};

/// Draws scalars from `rng` until one lies in [1, n).
KeyPair generate_keypair(RandomSource& rng);
/// Throws std::invalid_argument for a scalar outside [1, n).
PublicKey derive_public_key(const PrivateKey& secret);
/// True iff the 132 bytes encode an affine point on P-521.
bool is_valid_public_key(const PublicKey& key);
/// Bytes 124..131 of the key.
AccountId derive_account_id(const PublicKey& key);

Digest sha256(ByteView data);

/// ECDSA over SHA-256(payload) with an RFC 6979 deterministic nonce.
Signature sign(const PrivateKey& secret, ByteView payload);
/// Never throws; malformed keys or signatures verify as false.
bool verify(const PublicKey& key, ByteView payload, const Signature& signature);

void sign_transaction(Transaction& tx, const PrivateKey& secret);
bool verify_transaction(const Transaction& tx, const PublicKey& sender_key);
void sign_certificate(Certificate& cert, const PrivateKey& authority_secret);
bool verify_certificate(const Certificate& cert, const PublicKey& authority_key);

using IdPredicate = std::function<bool(std::string_view base85_id)>;

/// Generates up to `max_iterations` keypairs and returns the first whose
/// base85 account id satisfies `predicate`.
std::optional<KeyPair> vanity_search(const IdPredicate& predicate, std::size_t max_iterations,
                                     RandomSource& rng, std::size_t* iterations_used = nullptr);

/// Z85 ids made only of digits and letters.
bool is_alphanumeric_id(std::string_view base85_id);

struct MasterAuthority {
  AccountId id;
  PublicKey public_key;
};

/// The hard-coded authority of the v0.1 test protocol.
const MasterAuthority& master_authority_v01();
/// Authority embedded for a protocol version, if one has been published.
std::optional<MasterAuthority> master_authority_for(ProtocolVersion version);

}  // namespace moi
