/*
 * types.cpp
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

#include "moi/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace moi {

namespace {

constexpr std::array<std::string_view, 6> kCurrencyNames = {"NONE", "USD", "EUR",
                                                            "GBP",  "CNY", "JPY"};

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

AccountId AccountId::from_u64(std::uint64_t value) {
  AccountId id;
  for (int i = 7; i >= 0; --i) {
    id.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value & 0xFF);
    value >>= 8;
  }
  return id;
}

std::uint64_t AccountId::to_u64() const {
  std::uint64_t value = 0;
  for (auto b : bytes) value = (value << 8) | b;
  return value;
}

std::string AccountId::hex() const { return to_hex(view(bytes)); }

std::string Digest::hex() const { return to_hex(view(bytes)); }

bool CurrencyCode::is_named() const {
  return value < kCurrencyNames.size() || value == kCurrencyReserved.value;
}

std::string CurrencyCode::name() const {
  if (value < kCurrencyNames.size()) return std::string(kCurrencyNames[value]);
  if (value == kCurrencyReserved.value) return "RSV";
  static constexpr char kDigits[] = "0123456789ABCDEF";
  return std::string{'X', kDigits[value >> 4], kDigits[value & 0xF]};
}

std::optional<CurrencyCode> parse_currency(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kCurrencyNames.size(); ++i) {
    if (upper == kCurrencyNames[i]) return CurrencyCode{static_cast<std::uint8_t>(i)};
  }
  if (upper == "RSV") return kCurrencyReserved;

  unsigned value = 0;
  int base = 10;
  std::string_view digits = upper;
  if (digits.starts_with("0X")) {
    digits.remove_prefix(2);
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty() ||
      value > CurrencyCode::kMax) {
    return std::nullopt;
  }
  return CurrencyCode{static_cast<std::uint8_t>(value)};
}

std::string format_cents(Cents cents) {
  const bool negative = cents < 0;
  // Magnitude in unsigned space so INT64_MIN renders.
  std::uint64_t magnitude = negative ? (~static_cast<std::uint64_t>(cents) + 1)
                                     : static_cast<std::uint64_t>(cents);
  std::string out = std::to_string(magnitude / 100);
  const auto frac = magnitude % 100;
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return negative ? "-" + out : out;
}

std::optional<Cents> parse_cents(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || frac.size() > 2 || (dot != std::string_view::npos && frac.empty())) {
    return std::nullopt;
  }
  for (char c : whole) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  if (whole.size() > 15) return std::nullopt;

  Cents units = 0;
  std::from_chars(whole.data(), whole.data() + whole.size(), units);
  Cents minor = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    minor = minor * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  }
  const Cents total = units * 100 + minor;
  return negative ? -total : total;
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xF];
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.size() % 2 != 0) return std::nullopt;
  Bytes out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    const int hi = hex_value(text[i]);
    const int lo = hex_value(text[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace moi
