/*
 * wire.hpp
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

#include <string>
#include <string_view>

#include "moi/error.hpp"
#include "moi/types.hpp"

namespace moi {

inline constexpr std::size_t kTransactionHeaderSize = 24;
inline constexpr std::size_t kMinTransactionSize = kTransactionHeaderSize + kSignatureSize;  // 156
inline constexpr std::size_t kMaxReferenceWords = 15;
inline constexpr std::size_t kMaxReferenceSize = 4 * kMaxReferenceWords;  // 60
inline constexpr std::size_t kMaxTransactionSize = kMinTransactionSize + kMaxReferenceSize;

inline constexpr std::size_t kCertificatePayloadSize = 16;
inline constexpr std::size_t kCertificateSize = kCertificatePayloadSize + kSignatureSize;  // 148

inline constexpr std::size_t kSmsRefIdSize = 8;
inline constexpr std::size_t kSmsMaxPartSize = 140;

constexpr std::size_t transaction_size(std::size_t ref_words) {
  return kMinTransactionSize + 4 * ref_words;
}

/// A digital check.
///
/// The reference length is always a whole number of 4-byte words; the word
/// count stored in the low nibble of byte 0 is derived from it.
struct Transaction {
  ProtocolVersion version = kVersion01;
  Amount amount;
  CurrencyCode currency;
  MoiDate date;
  AccountId sender;
  AccountId recipient;
  Bytes reference;
  Signature signature;

  std::size_t ref_words() const { return reference.size() / 4; }

  bool operator==(const Transaction&) const = default;
};

/// Master authority grant of a bounded negative balance (or, with zero debt,
/// of registrar rights) to one account until a deadline.
struct Certificate {
  ProtocolVersion version = kVersion01;
  /// Restricted to 0x0..0xF: it shares byte 0 with the version nibble.
  CurrencyCode currency;
  /// Thousands of whole currency units.
  std::uint32_t debt_kilo = 0;
  MoiDate deadline;
  AccountId subject;
  Signature ma_signature;

  static constexpr std::uint32_t kMaxDebtKilo = (1u << 24) - 1;
  static constexpr std::uint8_t kMaxCurrency = 0xF;

  /// debt_kilo * 1000 units * 100 cents.
  Cents debt_bound_cents() const { return static_cast<Cents>(debt_kilo) * 100'000; }
  bool is_registrar() const { return debt_kilo == 0; }

  bool operator==(const Certificate&) const = default;
};

/// A check split into two short messages sharing an 8-byte reference id.
struct SmsPair {
  Bytes part1;  // ref id ++ signed payload
  Bytes part2;  // ref id ++ signature, always 140 bytes
};

Bytes encode_transaction(const Transaction& tx);
/// Total on arbitrary input: returns a transaction or throws CodecError.
Transaction decode_transaction(ByteView data);
/// Everything but the signature: the first 24 + 4 * ref_words bytes.
Bytes signed_payload(const Transaction& tx);

Bytes encode_certificate(const Certificate& cert);
Certificate decode_certificate(ByteView data);
/// The 16 bytes covered by the master authority signature.
Bytes certificate_payload(const Certificate& cert);

/// Zero-pads free text to the next 4-byte word. Throws CodecError when the
/// text exceeds 60 bytes.
Bytes make_reference(std::string_view text);
/// Reference bytes with trailing zero padding removed.
std::string reference_text(const Transaction& tx);

SmsPair sms_split(const Transaction& tx, const ByteArray<kSmsRefIdSize>& ref_id);
Transaction sms_join(ByteView part1, ByteView part2);

/// Base85 text forms. Transactions and certificates are always a whole
/// number of 4-byte words, so no padding is involved.
std::string transaction_to_text(const Transaction& tx);
Transaction transaction_from_text(std::string_view text);
std::string certificate_to_text(const Certificate& cert);
Certificate certificate_from_text(std::string_view text);
std::string account_id_to_text(const AccountId& id);
AccountId account_id_from_text(std::string_view text);
std::string public_key_to_text(const PublicKey& key);
PublicKey public_key_from_text(std::string_view text);

}  // namespace moi
