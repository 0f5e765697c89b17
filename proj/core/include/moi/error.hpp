/*
 * error.hpp
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace moi {

enum class CodecErrc {
  truncated,
  oversized,
  length_mismatch,
  field_out_of_range,
  reserved_bits,
  bad_character,
  bad_length,
  ref_id_mismatch,
};

std::string_view to_string(CodecErrc code);

/// Raised by every decoder and by encoders handed out-of-range fields.
class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  CodecErrc code() const noexcept { return code_; }

 private:
  CodecErrc code_;
};

}  // namespace moi
