/*
 * date.hpp
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

#include <chrono>
#include <string>
#include <string_view>

#include "moi/types.hpp"

namespace moi {

/// 2016-01-01T00:00:00Z as a system clock instant.
inline constexpr std::chrono::sys_seconds kMoiEpoch{
    std::chrono::sys_days{std::chrono::year{2016} / std::chrono::January / 1}};

/// Truncates to whole minutes. Throws CodecError(field_out_of_range) before
/// the epoch or past the 26-bit horizon.
MoiDate encode_date(std::chrono::sys_seconds timestamp);
std::chrono::sys_seconds decode_date(MoiDate date);

/// Current wall clock minute.
MoiDate current_date();

/// "YYYY-MM-DDTHH:MM" with an optional trailing "Z" or ":SS" seconds part.
std::optional<MoiDate> parse_iso_minute(std::string_view text);
/// "YYYY-MM-DDTHH:MMZ".
std::string format_iso_minute(MoiDate date);

}  // namespace moi
