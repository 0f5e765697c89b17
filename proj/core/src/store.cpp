/*
 * store.cpp
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

#include "moi/store.hpp"

#include <zlib.h>

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "moi/wire.hpp"

namespace moi {

namespace {

constexpr std::size_t kMaxPayload = 4096;

std::uint32_t crc_of(ByteView data) {
  return static_cast<std::uint32_t>(
      crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint32_t get_u32(ByteView in, std::size_t at) {
  return (std::uint32_t{in[at]} << 24) | (std::uint32_t{in[at + 1]} << 16) |
         (std::uint32_t{in[at + 2]} << 8) | in[at + 3];
}

bool known_tag(std::uint8_t tag) { return tag >= 0x01 && tag <= 0x04; }

std::size_t expected_payload(RecordTag tag, ByteView payload) {
  switch (tag) {
    case RecordTag::transaction:
      return payload.empty() ? kMinTransactionSize : transaction_size(payload[0] & 0x0F);
    case RecordTag::public_key: return kPublicKeySize + 4;
    case RecordTag::certificate: return kCertificateSize;
    case RecordTag::cleared: return kDigestSize;
  }
  return 0;
}

}  // namespace

Bytes frame_record(const LogRecord& record) {
  Bytes out;
  out.reserve(kRecordOverhead + record.payload.size());
  out.push_back(static_cast<std::uint8_t>(record.tag));
  put_u32(out, static_cast<std::uint32_t>(record.payload.size()));
  out.insert(out.end(), record.payload.begin(), record.payload.end());
  put_u32(out, crc_of(out));
  return out;
}

LogRecord transaction_record(const Transaction& tx) {
  return {RecordTag::transaction, encode_transaction(tx)};
}

LogRecord public_key_record(const PublicKey& key, MoiDate first_seen) {
  LogRecord record{RecordTag::public_key, Bytes(key.bytes.begin(), key.bytes.end())};
  put_u32(record.payload, first_seen.minutes);
  return record;
}

LogRecord certificate_record(const Certificate& cert) {
  return {RecordTag::certificate, encode_certificate(cert)};
}

LogRecord cleared_record(const Digest& digest) {
  return {RecordTag::cleared, Bytes(digest.bytes.begin(), digest.bytes.end())};
}

LoadResult parse_log(ByteView data) {
  LoadResult result;
  std::size_t offset = 0;
  auto stop = [&](std::string why) {
    result.truncated = true;
    result.error = std::move(why) + " at offset " + std::to_string(offset);
    return result;
  };
  while (offset < data.size()) {
    if (data.size() - offset < kRecordOverhead) return stop("partial record header");
    const std::uint8_t tag = data[offset];
    if (!known_tag(tag)) return stop("unknown record tag");
    const std::uint32_t length = get_u32(data, offset + 1);
    if (length > kMaxPayload) return stop("record length out of range");
    if (data.size() - offset < kRecordOverhead + length) return stop("partial record");
    const auto framed = data.subspan(offset, 5 + length);
    if (crc_of(framed) != get_u32(data, offset + 5 + length)) return stop("checksum mismatch");
    LogRecord record{static_cast<RecordTag>(tag), Bytes(framed.begin() + 5, framed.end())};
    if (record.payload.size() != expected_payload(record.tag, record.payload)) {
      return stop("payload size does not match record type");
    }
    result.records.push_back(std::move(record));
    offset += kRecordOverhead + length;
    result.valid_bytes = offset;
  }
  return result;
}

LoadResult load_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_log(data);
}

void replay(Ledger& ledger, const std::vector<LogRecord>& records) {
  for (const auto& record : records) {
    switch (record.tag) {
      case RecordTag::transaction:
        ledger.merge(decode_transaction(record.payload));
        break;
      case RecordTag::public_key: {
        PublicKey key;
        std::copy_n(record.payload.begin(), kPublicKeySize, key.bytes.begin());
        ledger.register_public_key(key, MoiDate{get_u32(record.payload, kPublicKeySize)});
        break;
      }
      case RecordTag::certificate:
        ledger.admit_certificate(decode_certificate(record.payload));
        break;
      case RecordTag::cleared: {
        Digest digest;
        std::copy_n(record.payload.begin(), kDigestSize, digest.bytes.begin());
        ledger.mark_cleared(digest);
        break;
      }
    }
  }
  ledger.recompute_all();
}

std::vector<LogRecord> snapshot_records(const Ledger& ledger) {
  std::vector<LogRecord> records;
  for (const auto& [id, account] : ledger.accounts()) {
    records.push_back(public_key_record(account.public_key, account.first_seen));
  }
  for (const auto& cert : ledger.certificates()) records.push_back(certificate_record(cert));

  std::vector<const StoredTransaction*> ordered;
  for (const auto& [digest, stored] : ledger.transactions()) ordered.push_back(&stored);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return std::tie(a->tx.date, a->tx.signature) < std::tie(b->tx.date, b->tx.signature);
  });
  for (const auto* stored : ordered) {
    records.push_back({RecordTag::transaction, stored->encoded});
  }
  for (const auto* stored : ordered) {
    if (stored->cleared) records.push_back(cleared_record(stored->digest));
  }
  return records;
}

LogWriter::LogWriter(std::filesystem::path path) : path_(std::move(path)) { reopen(); }

void LogWriter::reopen() {
  out_.close();
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot open log " + path_.string());
}

void LogWriter::append(const LogRecord& record) {
  const Bytes framed = frame_record(record);
  out_.write(reinterpret_cast<const char*>(framed.data()),
             static_cast<std::streamsize>(framed.size()));
  out_.flush();
  if (!out_) throw std::runtime_error("write failed on " + path_.string());
}

void LogWriter::truncate(std::uint64_t size) {
  out_.close();
  std::filesystem::resize_file(path_, size);
  reopen();
}

void LogWriter::rewrite(const std::vector<LogRecord>& records) {
  out_.close();
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream fresh(tmp, std::ios::binary | std::ios::trunc);
    for (const auto& record : records) {
      const Bytes framed = frame_record(record);
      fresh.write(reinterpret_cast<const char*>(framed.data()),
                  static_cast<std::streamsize>(framed.size()));
    }
    if (!fresh) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path_);
  reopen();
}

}  // namespace moi
