/*
 * types.hpp
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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moi {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

template <std::size_t N>
using ByteArray = std::array<std::uint8_t, N>;

inline constexpr std::size_t kAccountIdSize = 8;
inline constexpr std::size_t kPublicKeySize = 132;
inline constexpr std::size_t kSignatureSize = 132;
inline constexpr std::size_t kDigestSize = 32;

/// Trailing 8 bytes of a published public key.
struct AccountId {
  ByteArray<kAccountIdSize> bytes{};

  static AccountId from_u64(std::uint64_t value);
  std::uint64_t to_u64() const;
  std::string hex() const;

  auto operator<=>(const AccountId&) const = default;
};

/// Uncompressed P-521 point laid out as x (66 bytes) followed by y (66 bytes),
/// both big-endian, with no format prefix.
struct PublicKey {
  ByteArray<kPublicKeySize> bytes{};
  auto operator<=>(const PublicKey&) const = default;
};

/// ECDSA signature as r (66 bytes) followed by s (66 bytes), big-endian.
struct Signature {
  ByteArray<kSignatureSize> bytes{};
  auto operator<=>(const Signature&) const = default;
};

/// SHA-256 output; used for transaction digests and account checksums.
struct Digest {
  ByteArray<kDigestSize> bytes{};

  std::string hex() const;
  auto operator<=>(const Digest&) const = default;
};

/// Upper nibble of the first wire byte.
struct ProtocolVersion {
  std::uint8_t value = 0;

  static constexpr std::uint8_t kMax = 0xF;

  constexpr bool is_test() const { return value <= 0x3; }
  constexpr bool is_trading() const { return value == 0x4 || value == 0x5; }
  constexpr bool is_reserved() const { return value >= 0x6; }

  auto operator<=>(const ProtocolVersion&) const = default;
};

inline constexpr ProtocolVersion kVersionAlpha{0x0};
inline constexpr ProtocolVersion kVersion01{0x1};
inline constexpr ProtocolVersion kVersion10{0x4};

/// 6-bit currency code. Values without a registered name still decode.
struct CurrencyCode {
  std::uint8_t value = 0;

  static constexpr std::uint8_t kMax = 0x3F;

  bool is_named() const;
  /// Three-letter code for named currencies ("NONE" for 0x00), otherwise
  /// "X" followed by two hex digits.
  std::string name() const;

  auto operator<=>(const CurrencyCode&) const = default;
};

inline constexpr CurrencyCode kCurrencyNone{0x00};
inline constexpr CurrencyCode kCurrencyUsd{0x01};
inline constexpr CurrencyCode kCurrencyEur{0x02};
inline constexpr CurrencyCode kCurrencyGbp{0x03};
inline constexpr CurrencyCode kCurrencyCny{0x04};
inline constexpr CurrencyCode kCurrencyJpy{0x05};
inline constexpr CurrencyCode kCurrencyReserved{0x3F};

/// Accepts a three-letter name (case-insensitive), a decimal value or a
/// 0x-prefixed hex value.
std::optional<CurrencyCode> parse_currency(std::string_view text);

/// Whole minutes since 2016-01-01T00:00Z, 26 bits.
struct MoiDate {
  std::uint32_t minutes = 0;

  static constexpr std::uint32_t kMax = (1u << 26) - 1;

  auto operator<=>(const MoiDate&) const = default;
};

/// Minor currency units, 24 bits.
struct Amount {
  std::uint32_t cents = 0;

  static constexpr std::uint32_t kMax = (1u << 24) - 1;

  auto operator<=>(const Amount&) const = default;
};

/// Signed minor units, used for balances.
using Cents = std::int64_t;

/// "-12.34" style rendering with exactly two fraction digits.
std::string format_cents(Cents cents);
/// Parses "12", "12.3" or "12.34" (optionally signed) into cents.
std::optional<Cents> parse_cents(std::string_view text);

std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view text);

template <std::size_t N>
ByteView view(const ByteArray<N>& array) {
  return ByteView(array.data(), array.size());
}

}  // namespace moi
