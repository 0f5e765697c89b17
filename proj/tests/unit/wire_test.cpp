/*
 * wire_test.cpp
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

#include "moi/base85.hpp"
#include "moi/error.hpp"
#include "moi/wire.hpp"
#include "test_support.hpp"

namespace moi {
namespace {

using testing::random_certificate;
using testing::random_transaction;

CodecErrc decode_error(ByteView data) {
  try {
    decode_transaction(data);
  } catch (const CodecError& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return CodecErrc::truncated;
}

TEST(TransactionCodec, MinimalTransactionIs156Bytes) {
  Transaction tx;
  EXPECT_EQ(encode_transaction(tx).size(), 156u);
  EXPECT_EQ(transaction_to_text(tx).size(), 195u);
}

TEST(TransactionCodec, AllZeroFieldsEncodeToZeroBytesExceptVersion) {
  Transaction tx;
  tx.version = ProtocolVersion{0x1};
  const Bytes encoded = encode_transaction(tx);
  ASSERT_EQ(encoded.size(), 156u);
  EXPECT_EQ(encoded[0], 0x10);
  for (std::size_t i = 1; i < encoded.size(); ++i) EXPECT_EQ(encoded[i], 0) << i;
}

TEST(TransactionCodec, FifteenReferenceWordsGive216Bytes) {
  Transaction tx;
  tx.reference.assign(60, 'x');
  EXPECT_EQ(encode_transaction(tx).size(), 216u);
  EXPECT_EQ(signed_payload(tx).size(), 84u);
  EXPECT_EQ(transaction_to_text(tx).size(), 270u);
}

TEST(TransactionCodec, FieldLayoutIsBigEndian) {
  Transaction tx;
  tx.version = ProtocolVersion{0x4};
  tx.amount = Amount{0x123456};
  tx.currency = CurrencyCode{0x2A};
  tx.date = MoiDate{0x3ABCDEF};
  tx.sender = AccountId::from_u64(0x0102030405060708);
  tx.recipient = AccountId::from_u64(0x1112131415161718);
  tx.reference = {'a', 'b', 'c', 'd'};
  tx.signature.bytes.fill(0xEE);
  const Bytes b = encode_transaction(tx);
  ASSERT_EQ(b.size(), 160u);
  EXPECT_EQ(b[0], 0x41);
  EXPECT_EQ(b[1], 0x12);
  EXPECT_EQ(b[2], 0x34);
  EXPECT_EQ(b[3], 0x56);
  const std::uint32_t packed = (std::uint32_t{b[4]} << 24) | (b[5] << 16) | (b[6] << 8) | b[7];
  EXPECT_EQ(packed >> 26, 0x2Au);
  EXPECT_EQ(packed & MoiDate::kMax, 0x3ABCDEFu);
  EXPECT_EQ(b[8], 0x01);
  EXPECT_EQ(b[15], 0x08);
  EXPECT_EQ(b[16], 0x11);
  EXPECT_EQ(b[23], 0x18);
  EXPECT_EQ(b[24], 'a');
  EXPECT_EQ(b[28], 0xEE);
  EXPECT_EQ(b[159], 0xEE);
}

TEST(TransactionCodec, RoundTripsRandomTransactions) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Transaction tx = random_transaction(rng);
    const Bytes encoded = encode_transaction(tx);
    EXPECT_EQ(encoded.size(), transaction_size(tx.ref_words()));
    EXPECT_EQ(decode_transaction(encoded), tx);
    EXPECT_EQ(transaction_from_text(transaction_to_text(tx)), tx);
  }
}

TEST(TransactionCodec, SignedPayloadIsPrefixOfEncoding) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Transaction tx = random_transaction(rng);
    const Bytes payload = signed_payload(tx);
    const Bytes encoded = encode_transaction(tx);
    ASSERT_EQ(payload.size(), 24 + tx.reference.size());
    EXPECT_TRUE(std::equal(payload.begin(), payload.end(), encoded.begin()));
  }
}

TEST(TransactionCodec, CurrencyAndDatePackingIsLossless) {
  std::mt19937_64 rng(9);
  for (std::uint8_t currency = 0; currency < 64; ++currency) {
    for (std::uint32_t date : {0u, 1u, MoiDate::kMax, static_cast<std::uint32_t>(rng() % MoiDate::kMax),
                               static_cast<std::uint32_t>(rng() % MoiDate::kMax)}) {
      Transaction tx;
      tx.currency = CurrencyCode{currency};
      tx.date = MoiDate{date};
      const Transaction back = decode_transaction(encode_transaction(tx));
      EXPECT_EQ(back.currency.value, currency);
      EXPECT_EQ(back.date.minutes, date);
    }
  }
}

TEST(TransactionCodec, RejectsTruncatedInput) {
  EXPECT_EQ(decode_error(Bytes(155, 0)), CodecErrc::truncated);
  EXPECT_EQ(decode_error(Bytes{}), CodecErrc::truncated);
}

TEST(TransactionCodec, RejectsLengthInconsistentWithReferenceWords) {
  Bytes data(156, 0);
  data[0] = 0x11;
  try {
    decode_transaction(data);
    FAIL() << "decode succeeded";
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrc::length_mismatch);
    EXPECT_NE(std::string(e.what()).find("160"), std::string::npos) << e.what();
  }
  EXPECT_EQ(decode_error(Bytes(217, 0)), CodecErrc::oversized);
}

TEST(TransactionCodec, EncodeRejectsOutOfRangeFields) {
  Transaction tx;
  tx.amount = Amount{Amount::kMax + 1};
  EXPECT_THROW(encode_transaction(tx), CodecError);
  tx = {};
  tx.currency = CurrencyCode{64};
  EXPECT_THROW(encode_transaction(tx), CodecError);
  tx = {};
  tx.date = MoiDate{MoiDate::kMax + 1};
  EXPECT_THROW(encode_transaction(tx), CodecError);
  tx = {};
  tx.reference = {1, 2, 3};
  EXPECT_THROW(encode_transaction(tx), CodecError);
  tx = {};
  tx.reference.assign(64, 0);
  EXPECT_THROW(encode_transaction(tx), CodecError);
}

TEST(TransactionCodec, DecodeIsTotalOnArbitraryBytes) {
  std::mt19937_64 rng(10);
  std::size_t accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    Bytes data(rng() % 240);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    if (!data.empty() && rng() % 2) {
      data[0] = static_cast<std::uint8_t>((data[0] & 0xF0) | ((data.size() >= 156 ? (data.size() - 156) / 4 : 0) & 0xF));
    }
    try {
      const Transaction tx = decode_transaction(data);
      EXPECT_EQ(encode_transaction(tx), data);
      ++accepted;
    } catch (const CodecError&) {
    }
  }
  EXPECT_GT(accepted, 0u);
}

TEST(Reference, PadsTextToWords) {
  EXPECT_EQ(make_reference("").size(), 0u);
  EXPECT_EQ(make_reference("invoice-42").size(), 12u);
  EXPECT_EQ(make_reference(std::string(60, 'a')).size(), 60u);
  EXPECT_THROW(make_reference(std::string(61, 'a')), CodecError);

  Transaction tx;
  tx.reference = make_reference("invoice-42");
  EXPECT_EQ(tx.ref_words(), 3u);
  EXPECT_EQ(encode_transaction(tx).size(), 168u);
  EXPECT_EQ(reference_text(tx), "invoice-42");
}

TEST(CertificateCodec, Is148BytesAndRoundTrips) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Certificate cert = random_certificate(rng);
    const Bytes encoded = encode_certificate(cert);
    ASSERT_EQ(encoded.size(), 148u);
    EXPECT_EQ(decode_certificate(encoded), cert);
    EXPECT_EQ(certificate_from_text(certificate_to_text(cert)), cert);
    const Bytes payload = certificate_payload(cert);
    EXPECT_EQ(payload.size(), 16u);
    EXPECT_TRUE(std::equal(payload.begin(), payload.end(), encoded.begin()));
  }
}

TEST(CertificateCodec, Layout) {
  Certificate cert;
  cert.version = ProtocolVersion{0x1};
  cert.currency = kCurrencyEur;
  cert.debt_kilo = 0x000102;
  cert.deadline = MoiDate{0x0000FFFF};
  cert.subject = AccountId::from_u64(0xAABBCCDDEEFF0011);
  const Bytes b = encode_certificate(cert);
  EXPECT_EQ(b[0], 0x12);
  EXPECT_EQ(b[1], 0x00);
  EXPECT_EQ(b[2], 0x01);
  EXPECT_EQ(b[3], 0x02);
  EXPECT_EQ(b[4], 0x00);
  EXPECT_EQ(b[6], 0xFF);
  EXPECT_EQ(b[8], 0xAA);
  EXPECT_EQ(b[15], 0x11);
}

TEST(CertificateCodec, RejectsBadInput) {
  EXPECT_THROW(decode_certificate(Bytes(147, 0)), CodecError);
  EXPECT_THROW(decode_certificate(Bytes(149, 0)), CodecError);
  Bytes reserved(148, 0);
  reserved[4] = 0x04;  // lowest reserved deadline bit
  try {
    decode_certificate(reserved);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrc::reserved_bits);
  }
  Certificate wide;
  wide.currency = CurrencyCode{0x10};
  EXPECT_THROW(encode_certificate(wide), CodecError);
}

TEST(Sms, MinimalCheckSplitsInto32And140Bytes) {
  std::mt19937_64 rng(12);
  Transaction tx = random_transaction(rng);
  tx.reference.clear();
  const ByteArray<8> ref{1, 2, 3, 4, 5, 6, 7, 8};
  const SmsPair pair = sms_split(tx, ref);
  EXPECT_EQ(pair.part1.size(), 32u);
  EXPECT_EQ(pair.part2.size(), 140u);
  EXPECT_EQ(sms_join(pair.part1, pair.part2), tx);
}

TEST(Sms, MaximalReferenceStaysWithinOneMessage) {
  std::mt19937_64 rng(13);
  Transaction tx = random_transaction(rng);
  tx.reference.assign(60, 0x41);
  const SmsPair pair = sms_split(tx, ByteArray<8>{});
  EXPECT_EQ(pair.part1.size(), 92u);
  EXPECT_LE(pair.part1.size(), kSmsMaxPartSize);
  EXPECT_EQ(pair.part2.size(), 140u);
  EXPECT_EQ(sms_join(pair.part1, pair.part2), tx);
}

TEST(Sms, JoinRejectsMismatchedParts) {
  std::mt19937_64 rng(14);
  const Transaction tx = random_transaction(rng);
  const SmsPair a = sms_split(tx, ByteArray<8>{1});
  const SmsPair b = sms_split(tx, ByteArray<8>{2});
  try {
    sms_join(a.part1, b.part2);
    FAIL();
  } catch (const CodecError& e) {
    EXPECT_EQ(e.code(), CodecErrc::ref_id_mismatch);
  }
  Bytes short_part2(a.part2.begin(), a.part2.end() - 1);
  EXPECT_THROW(sms_join(a.part1, short_part2), CodecError);
}

TEST(TextForms, AccountIdAcceptsBase85AndHex) {
  const AccountId id = AccountId::from_u64(0x864FD26FB559F75B);
  EXPECT_EQ(account_id_to_text(id), "HelloWorld");
  EXPECT_EQ(account_id_from_text("HelloWorld"), id);
  EXPECT_EQ(account_id_from_text("864fd26fb559f75b"), id);
  EXPECT_THROW(account_id_from_text("Hello"), CodecError);
}

}  // namespace
}  // namespace moi
