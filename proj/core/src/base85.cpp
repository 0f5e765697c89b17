/*
 * base85.cpp
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

#include "moi/base85.hpp"

#include <array>

#include "moi/error.hpp"

namespace moi {

namespace {

constexpr std::string_view kZ85 =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ.-:+=^!/*?&<>()[]{}@%$#";
constexpr std::string_view kRfc1924 =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz!#$%&()*+-;<=>?@^_`{|}~";

static_assert(kZ85.size() == 85 && kRfc1924.size() == 85);

struct Table {
  std::string_view encode;
  std::array<std::int8_t, 256> decode{};
};

constexpr Table make_table(std::string_view alphabet) {
  Table t{alphabet, {}};
  for (auto& v : t.decode) v = -1;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    t.decode[static_cast<unsigned char>(alphabet[i])] = static_cast<std::int8_t>(i);
  }
  return t;
}

constexpr Table kZ85Table = make_table(kZ85);
constexpr Table kRfc1924Table = make_table(kRfc1924);

const Table& table_for(Base85Alphabet alphabet) {
  return alphabet == Base85Alphabet::z85 ? kZ85Table : kRfc1924Table;
}

}  // namespace

std::string base85_encode(ByteView data, Base85Alphabet alphabet) {
  const auto& table = table_for(alphabet);
  std::string out;
  out.reserve(base85_encoded_size(data.size()));
  for (std::size_t i = 0; i < data.size(); i += 4) {
    std::uint32_t value = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      value = (value << 8) | (i + j < data.size() ? data[i + j] : 0);
    }
    char group[5];
    for (int k = 4; k >= 0; --k) {
      group[k] = table.encode[value % 85];
      value /= 85;
    }
    out.append(group, 5);
  }
  return out;
}

Bytes base85_decode(std::string_view text, Base85Alphabet alphabet) {
  if (text.size() % 5 != 0) {
    throw CodecError(CodecErrc::bad_length,
                     "base85 text length " + std::to_string(text.size()) +
                         " is not a multiple of 5");
  }
  const auto& table = table_for(alphabet);
  Bytes out;
  out.reserve(text.size() / 5 * 4);
  for (std::size_t i = 0; i < text.size(); i += 5) {
    std::uint64_t value = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      const auto digit = table.decode[static_cast<unsigned char>(text[i + k])];
      if (digit < 0) {
        throw CodecError(CodecErrc::bad_character,
                         "invalid base85 character at offset " + std::to_string(i + k));
      }
      value = value * 85 + static_cast<std::uint64_t>(digit);
    }
    if (value > 0xFFFFFFFFull) {
      throw CodecError(CodecErrc::field_out_of_range,
                       "base85 group at offset " + std::to_string(i) + " overflows 32 bits");
    }
    out.push_back(static_cast<std::uint8_t>(value >> 24));
    out.push_back(static_cast<std::uint8_t>(value >> 16));
    out.push_back(static_cast<std::uint8_t>(value >> 8));
    out.push_back(static_cast<std::uint8_t>(value));
  }
  return out;
}

}  // namespace moi
