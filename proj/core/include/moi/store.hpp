/*
 * store.hpp
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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "moi/ledger.hpp"
#include "moi/types.hpp"

namespace moi {

enum class RecordTag : std::uint8_t {
  transaction = 0x01,
  public_key = 0x02,
  certificate = 0x03,
  cleared = 0x04,
};

struct LogRecord {
  RecordTag tag = RecordTag::transaction;
  Bytes payload;

  bool operator==(const LogRecord&) const = default;
};

/// tag (1) | payload length (4, big-endian) | payload | CRC-32 over the
/// preceding bytes (4, big-endian).
inline constexpr std::size_t kRecordOverhead = 9;

Bytes frame_record(const LogRecord& record);

LogRecord transaction_record(const Transaction& tx);
/// Key followed by its 4-byte publication date.
LogRecord public_key_record(const PublicKey& key, MoiDate first_seen);
LogRecord certificate_record(const Certificate& cert);
LogRecord cleared_record(const Digest& digest);

struct LoadResult {
  std::vector<LogRecord> records;
  /// Byte offset just past the last valid record.
  std::uint64_t valid_bytes = 0;
  bool truncated = false;
  /// Why loading stopped early, empty when the whole file was consumed.
  std::string error;
};

/// Reads records until end of file or the first corrupt one (bad tag,
/// impossible length, checksum mismatch, or a partial record).
LoadResult load_log(const std::filesystem::path& path);
LoadResult parse_log(ByteView data);

/// Rebuilds ledger state by applying records in order. Records are trusted:
/// they were validated before being written.
void replay(Ledger& ledger, const std::vector<LogRecord>& records);

/// Every record needed to reproduce `ledger` from scratch.
std::vector<LogRecord> snapshot_records(const Ledger& ledger);

/// Append-only writer. Each append is flushed before returning.
class LogWriter {
 public:
  explicit LogWriter(std::filesystem::path path);

  void append(const LogRecord& record);
  /// Cuts the file back to `size` bytes (used to drop a corrupt tail).
  void truncate(std::uint64_t size);
  /// Atomically replaces the file contents with `records`.
  void rewrite(const std::vector<LogRecord>& records);

  const std::filesystem::path& path() const { return path_; }

 private:
  void reopen();

  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace moi
