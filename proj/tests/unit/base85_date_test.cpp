/*
 * base85_date_test.cpp
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

#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "moi/base85.hpp"
#include "moi/date.hpp"
#include "moi/error.hpp"

namespace moi {
namespace {

using namespace std::chrono;

TEST(Base85, HelloWorldVector) {
  const Bytes data{0x86, 0x4F, 0xD2, 0x6F, 0xB5, 0x59, 0xF7, 0x5B};
  EXPECT_EQ(base85_encode(data), "HelloWorld");
  EXPECT_EQ(base85_decode("HelloWorld"), data);
}

TEST(Base85, EmptyInput) {
  EXPECT_EQ(base85_encode(Bytes{}), "");
  EXPECT_TRUE(base85_decode("").empty());
}

TEST(Base85, LengthFormulaAndZeroPadding) {
  for (std::size_t n = 0; n < 40; ++n) {
    const Bytes data(n, 0xA5);
    const std::string text = base85_encode(data);
    EXPECT_EQ(text.size(), 5 * ((n + 3) / 4));
    EXPECT_EQ(text.size(), base85_encoded_size(n));
    Bytes back = base85_decode(text);
    ASSERT_EQ(back.size(), 4 * ((n + 3) / 4));
    for (std::size_t i = n; i < back.size(); ++i) EXPECT_EQ(back[i], 0);
    back.resize(n);
    EXPECT_EQ(back, data);
  }
  EXPECT_EQ(base85_encode(Bytes(156, 0)).size(), 195u);
}

TEST(Base85, RoundTripsBothAlphabets) {
  std::mt19937_64 rng(3);
  for (auto alphabet : {Base85Alphabet::z85, Base85Alphabet::rfc1924}) {
    for (int i = 0; i < 500; ++i) {
      Bytes data(4 * (rng() % 60));
      for (auto& b : data) b = static_cast<std::uint8_t>(rng());
      EXPECT_EQ(base85_decode(base85_encode(data, alphabet), alphabet), data);
    }
  }
}

TEST(Base85, BoundaryGroups) {
  EXPECT_EQ(base85_encode(Bytes{0, 0, 0, 0}), "00000");
  EXPECT_EQ(base85_encode(Bytes{0xFF, 0xFF, 0xFF, 0xFF}), "%nSc0");
  EXPECT_EQ(base85_encode(Bytes{0xFF, 0xFF, 0xFF, 0xFF}, Base85Alphabet::rfc1924), "|NsC0");
}

TEST(Base85, RejectsMalformedText) {
  auto code = [](std::string_view text) {
    try {
      base85_decode(text);
    } catch (const CodecError& e) {
      return e.code();
    }
    return CodecErrc::truncated;
  };
  EXPECT_EQ(code("Hell"), CodecErrc::bad_length);
  EXPECT_EQ(code("Hell~"), CodecErrc::bad_character);
  EXPECT_EQ(code("Hell\""), CodecErrc::bad_character);
  EXPECT_EQ(code("%nSc1"), CodecErrc::field_out_of_range);
}

TEST(Base85, PublishedIdRenderingUsesRfc1924Ordering) {
  const Bytes ma_id{0x42, 0xDB, 0x8C, 0xD2, 0x75, 0xA0, 0x19, 0xE9};
  EXPECT_EQ(base85_encode(ma_id, Base85Alphabet::rfc1924), "Lfeeeb)XsP");
  EXPECT_EQ(base85_encode(ma_id), "lFEEEB!xSp");
}

TEST(Dates, EpochAndMinuteTruncation) {
  EXPECT_EQ(encode_date(sys_days{2016y / January / 1}).minutes, 0u);
  EXPECT_EQ(encode_date(sys_days{2016y / January / 1} + 1h + 30s).minutes, 60u);
  EXPECT_EQ(decode_date(MoiDate{60}), sys_days{2016y / January / 1} + 1h);
}

TEST(Dates, HorizonEndsIn2143) {
  const auto last = decode_date(MoiDate{MoiDate::kMax});
  const year_month_day ymd{floor<days>(last)};
  EXPECT_EQ(ymd.year(), 2143y);
  EXPECT_EQ(format_iso_minute(MoiDate{MoiDate::kMax}), "2143-08-06T09:03Z");
}

TEST(Dates, RangeErrors) {
  EXPECT_THROW(encode_date(sys_days{2015y / December / 31}), CodecError);
  EXPECT_THROW(encode_date(sys_days{2016y / January / 1} + minutes{1 << 26}), CodecError);
  EXPECT_NO_THROW(encode_date(sys_days{2016y / January / 1} + minutes{(1 << 26) - 1}));
}

TEST(Dates, IsoMinuteParsing) {
  EXPECT_EQ(parse_iso_minute("2016-01-01T00:00")->minutes, 0u);
  EXPECT_EQ(parse_iso_minute("2016-01-01T01:00:59Z")->minutes, 60u);
  EXPECT_EQ(parse_iso_minute("2016-01-02T00:00Z")->minutes, 1440u);
  EXPECT_FALSE(parse_iso_minute("2015-12-31T23:59"));
  EXPECT_FALSE(parse_iso_minute("2016-13-01T00:00"));
  EXPECT_FALSE(parse_iso_minute("yesterday"));
  const MoiDate d{12'345'678};
  EXPECT_EQ(parse_iso_minute(format_iso_minute(d)), d);
}

}  // namespace
}  // namespace moi
