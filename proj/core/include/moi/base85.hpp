/*
 * base85.hpp
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

#include "moi/types.hpp"

namespace moi {

enum class Base85Alphabet {
  /// ZeroMQ Z85; the protocol's text form.
  z85,
  /// RFC 1924 ordering (digits, upper, lower, symbols). Only used to read
  /// historical renderings of the master authority constants.
  rfc1924,
};

/// Every 4 input bytes become 5 characters. Input that is not a multiple of
/// 4 is zero-padded; the caller keeps track of the unpadded length.
std::string base85_encode(ByteView data, Base85Alphabet alphabet = Base85Alphabet::z85);

/// Throws CodecError for a length that is not a multiple of 5, a character
/// outside the alphabet, or a group whose value exceeds 2^32 - 1.
Bytes base85_decode(std::string_view text, Base85Alphabet alphabet = Base85Alphabet::z85);

inline constexpr std::size_t base85_encoded_size(std::size_t bytes) {
  return 5 * ((bytes + 3) / 4);
}

}  // namespace moi
