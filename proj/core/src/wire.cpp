/*
 * wire.cpp
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

#include "moi/wire.hpp"

#include <algorithm>

#include "moi/base85.hpp"

namespace moi {

std::string_view to_string(CodecErrc code) {
  switch (code) {
    case CodecErrc::truncated: return "truncated";
    case CodecErrc::oversized: return "oversized";
    case CodecErrc::length_mismatch: return "length-mismatch";
    case CodecErrc::field_out_of_range: return "field-out-of-range";
    case CodecErrc::reserved_bits: return "reserved-bits";
    case CodecErrc::bad_character: return "bad-character";
    case CodecErrc::bad_length: return "bad-length";
    case CodecErrc::ref_id_mismatch: return "ref-id-mismatch";
  }
  return "unknown";
}

namespace {

void put_u24(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  put_u24(out, v & 0xFFFFFF);
}

std::uint32_t get_u24(ByteView in, std::size_t at) {
  return (std::uint32_t{in[at]} << 16) | (std::uint32_t{in[at + 1]} << 8) | in[at + 2];
}

std::uint32_t get_u32(ByteView in, std::size_t at) {
  return (std::uint32_t{in[at]} << 24) | get_u24(in, at + 1);
}

template <std::size_t N>
void put_array(Bytes& out, const ByteArray<N>& a) {
  out.insert(out.end(), a.begin(), a.end());
}

template <std::size_t N>
ByteArray<N> get_array(ByteView in, std::size_t at) {
  ByteArray<N> a;
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(at), N, a.begin());
  return a;
}

void require(bool ok, CodecErrc code, const char* what) {
  if (!ok) throw CodecError(code, what);
}

void check_transaction_fields(const Transaction& tx) {
  require(tx.version.value <= ProtocolVersion::kMax, CodecErrc::field_out_of_range,
          "protocol version exceeds 4 bits");
  require(tx.amount.cents <= Amount::kMax, CodecErrc::field_out_of_range,
          "amount exceeds 24 bits");
  require(tx.currency.value <= CurrencyCode::kMax, CodecErrc::field_out_of_range,
          "currency exceeds 6 bits");
  require(tx.date.minutes <= MoiDate::kMax, CodecErrc::field_out_of_range,
          "date exceeds 26 bits");
  require(tx.reference.size() % 4 == 0, CodecErrc::length_mismatch,
          "reference length is not a whole number of 4-byte words");
  require(tx.reference.size() <= kMaxReferenceSize, CodecErrc::field_out_of_range,
          "reference longer than 60 bytes");
}

}  // namespace

Bytes signed_payload(const Transaction& tx) {
  check_transaction_fields(tx);
  Bytes out;
  out.reserve(transaction_size(tx.ref_words()));
  out.push_back(static_cast<std::uint8_t>((tx.version.value << 4) | tx.ref_words()));
  put_u24(out, tx.amount.cents);
  put_u32(out, (std::uint32_t{tx.currency.value} << 26) | tx.date.minutes);
  put_array(out, tx.sender.bytes);
  put_array(out, tx.recipient.bytes);
  out.insert(out.end(), tx.reference.begin(), tx.reference.end());
  return out;
}

Bytes encode_transaction(const Transaction& tx) {
  Bytes out = signed_payload(tx);
  put_array(out, tx.signature.bytes);
  return out;
}

Transaction decode_transaction(ByteView data) {
  if (data.size() < kMinTransactionSize) {
    throw CodecError(CodecErrc::truncated, "transaction shorter than 156 bytes");
  }
  if (data.size() > kMaxTransactionSize) {
    throw CodecError(CodecErrc::oversized, "transaction longer than 216 bytes");
  }
  const std::size_t words = data[0] & 0x0F;
  const std::size_t expected = transaction_size(words);
  if (data.size() != expected) {
    throw CodecError(CodecErrc::length_mismatch,
                     "length mismatch: expected " + std::to_string(expected) + ", got " +
                         std::to_string(data.size()));
  }

  Transaction tx;
  tx.version = ProtocolVersion{static_cast<std::uint8_t>(data[0] >> 4)};
  tx.amount = Amount{get_u24(data, 1)};
  const std::uint32_t packed = get_u32(data, 4);
  tx.currency = CurrencyCode{static_cast<std::uint8_t>(packed >> 26)};
  tx.date = MoiDate{packed & MoiDate::kMax};
  tx.sender.bytes = get_array<kAccountIdSize>(data, 8);
  tx.recipient.bytes = get_array<kAccountIdSize>(data, 16);
  const auto ref_begin = data.begin() + kTransactionHeaderSize;
  tx.reference.assign(ref_begin, ref_begin + static_cast<std::ptrdiff_t>(4 * words));
  tx.signature.bytes = get_array<kSignatureSize>(data, kTransactionHeaderSize + 4 * words);
  return tx;
}

Bytes certificate_payload(const Certificate& cert) {
  require(cert.version.value <= ProtocolVersion::kMax, CodecErrc::field_out_of_range,
          "protocol version exceeds 4 bits");
  require(cert.currency.value <= Certificate::kMaxCurrency, CodecErrc::field_out_of_range,
          "certificate currency must fit in 4 bits");
  require(cert.debt_kilo <= Certificate::kMaxDebtKilo, CodecErrc::field_out_of_range,
          "debt exceeds 24 bits");
  require(cert.deadline.minutes <= MoiDate::kMax, CodecErrc::field_out_of_range,
          "deadline exceeds 26 bits");
  Bytes out;
  out.reserve(kCertificateSize);
  out.push_back(static_cast<std::uint8_t>((cert.version.value << 4) | cert.currency.value));
  put_u24(out, cert.debt_kilo);
  put_u32(out, cert.deadline.minutes);
  put_array(out, cert.subject.bytes);
  return out;
}

Bytes encode_certificate(const Certificate& cert) {
  Bytes out = certificate_payload(cert);
  put_array(out, cert.ma_signature.bytes);
  return out;
}

Certificate decode_certificate(ByteView data) {
  if (data.size() < kCertificateSize) {
    throw CodecError(CodecErrc::truncated, "certificate shorter than 148 bytes");
  }
  if (data.size() > kCertificateSize) {
    throw CodecError(CodecErrc::oversized, "certificate longer than 148 bytes");
  }
  const std::uint32_t deadline = get_u32(data, 4);
  if (deadline > MoiDate::kMax) {
    throw CodecError(CodecErrc::reserved_bits, "certificate deadline has reserved bits set");
  }
  Certificate cert;
  cert.version = ProtocolVersion{static_cast<std::uint8_t>(data[0] >> 4)};
  cert.currency = CurrencyCode{static_cast<std::uint8_t>(data[0] & 0x0F)};
  cert.debt_kilo = get_u24(data, 1);
  cert.deadline = MoiDate{deadline};
  cert.subject.bytes = get_array<kAccountIdSize>(data, 8);
  cert.ma_signature.bytes = get_array<kSignatureSize>(data, kCertificatePayloadSize);
  return cert;
}

Bytes make_reference(std::string_view text) {
  if (text.size() > kMaxReferenceSize) {
    throw CodecError(CodecErrc::field_out_of_range,
                     "reference text is " + std::to_string(text.size()) +
                         " bytes; at most 60 fit");
  }
  Bytes out(text.begin(), text.end());
  out.resize((out.size() + 3) / 4 * 4, 0);
  return out;
}

std::string reference_text(const Transaction& tx) {
  auto end = tx.reference.end();
  while (end != tx.reference.begin() && *(end - 1) == 0) --end;
  return std::string(tx.reference.begin(), end);
}

SmsPair sms_split(const Transaction& tx, const ByteArray<kSmsRefIdSize>& ref_id) {
  SmsPair pair;
  pair.part1.assign(ref_id.begin(), ref_id.end());
  const Bytes payload = signed_payload(tx);
  pair.part1.insert(pair.part1.end(), payload.begin(), payload.end());
  pair.part2.assign(ref_id.begin(), ref_id.end());
  put_array(pair.part2, tx.signature.bytes);
  return pair;
}

Transaction sms_join(ByteView part1, ByteView part2) {
  if (part2.size() != kSmsRefIdSize + kSignatureSize) {
    throw CodecError(CodecErrc::bad_length, "signature message must be exactly 140 bytes");
  }
  if (part1.size() > kSmsMaxPartSize) {
    throw CodecError(CodecErrc::oversized, "message part exceeds 140 bytes");
  }
  if (part1.size() < kSmsRefIdSize + kTransactionHeaderSize) {
    throw CodecError(CodecErrc::truncated, "message part shorter than 32 bytes");
  }
  if (!std::equal(part1.begin(), part1.begin() + kSmsRefIdSize, part2.begin())) {
    throw CodecError(CodecErrc::ref_id_mismatch, "message parts carry different reference ids");
  }
  Bytes joined(part1.begin() + kSmsRefIdSize, part1.end());
  joined.insert(joined.end(), part2.begin() + kSmsRefIdSize, part2.end());
  return decode_transaction(joined);
}

std::string transaction_to_text(const Transaction& tx) {
  return base85_encode(encode_transaction(tx));
}

Transaction transaction_from_text(std::string_view text) {
  return decode_transaction(base85_decode(text));
}

std::string certificate_to_text(const Certificate& cert) {
  return base85_encode(encode_certificate(cert));
}

Certificate certificate_from_text(std::string_view text) {
  return decode_certificate(base85_decode(text));
}

std::string account_id_to_text(const AccountId& id) { return base85_encode(view(id.bytes)); }

AccountId account_id_from_text(std::string_view text) {
  Bytes raw;
  if (text.size() == 10) {
    raw = base85_decode(text);
  } else if (auto hex = from_hex(text); hex && hex->size() == kAccountIdSize) {
    raw = std::move(*hex);
  } else {
    throw CodecError(CodecErrc::bad_length,
                     "account id must be 10 base85 characters or 16 hex digits");
  }
  AccountId id;
  std::copy(raw.begin(), raw.end(), id.bytes.begin());
  return id;
}

std::string public_key_to_text(const PublicKey& key) { return base85_encode(view(key.bytes)); }

PublicKey public_key_from_text(std::string_view text) {
  const Bytes raw = base85_decode(text);
  if (raw.size() != kPublicKeySize) {
    throw CodecError(CodecErrc::bad_length, "public key must be 132 bytes");
  }
  PublicKey key;
  std::copy(raw.begin(), raw.end(), key.bytes.begin());
  return key;
}

}  // namespace moi
