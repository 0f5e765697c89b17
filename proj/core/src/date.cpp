/*
 * date.cpp
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

#include "moi/date.hpp"

#include <charconv>
#include <cstdio>

#include "moi/error.hpp"

namespace moi {

using namespace std::chrono;

MoiDate encode_date(sys_seconds timestamp) {
  if (timestamp < kMoiEpoch) {
    throw CodecError(CodecErrc::field_out_of_range, "timestamp precedes 2016-01-01T00:00Z");
  }
  const auto minutes_since = duration_cast<minutes>(timestamp - kMoiEpoch).count();
  if (minutes_since > static_cast<long long>(MoiDate::kMax)) {
    throw CodecError(CodecErrc::field_out_of_range, "timestamp beyond the 26-bit date range");
  }
  return MoiDate{static_cast<std::uint32_t>(minutes_since)};
}

sys_seconds decode_date(MoiDate date) { return kMoiEpoch + minutes{date.minutes}; }

MoiDate current_date() {
  return encode_date(time_point_cast<seconds>(system_clock::now()));
}

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc{} && ptr == first + len;
}

}  // namespace

std::optional<MoiDate> parse_iso_minute(std::string_view text) {
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) text.remove_suffix(1);
  // YYYY-MM-DDTHH:MM[:SS]
  if (text.size() != 16 && text.size() != 19) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
    return std::nullopt;
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d) ||
      !read_int(text, 11, 2, h) || !read_int(text, 14, 2, mi)) {
    return std::nullopt;
  }
  if (text.size() == 19 && (text[16] != ':' || !read_int(text, 17, 2, s))) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  const sys_seconds ts = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
  try {
    return encode_date(ts);
  } catch (const CodecError&) {
    return std::nullopt;
  }
}

std::string format_iso_minute(MoiDate date) {
  const auto ts = decode_date(date);
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()));
  return buf;
}

}  // namespace moi
