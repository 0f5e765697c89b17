/*
 * node.hpp
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
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "moi/ledger.hpp"
#include "moi/store.hpp"
#include "moi/wire.hpp"

namespace moi {

using NodeId = std::uint32_t;

inline constexpr std::uint32_t kDefaultQuarantineMinutes = 2;

/// Minutes a check dated `tx_date` is held when it arrives at `now`:
/// max(0, quarantine - age).
std::uint32_t tempo_delay(MoiDate tx_date, MoiDate now,
                          std::uint32_t quarantine_minutes = kDefaultQuarantineMinutes);

struct NodeConfig {
  LedgerConfig ledger;
  std::uint32_t quarantine_minutes = kDefaultQuarantineMinutes;
  /// Append-only log; state is replayed from it on construction.
  std::optional<std::filesystem::path> log_path;
};

struct QuarantineEntry {
  Transaction tx;
  Digest digest;
  MoiDate release;
  std::uint64_t sequence = 0;
};

struct SubmitResult {
  /// Empty when queued.
  std::optional<Rule> rejected_by;
  MoiDate release;
  Digest digest;

  bool queued() const { return !rejected_by.has_value(); }
};

struct ReleaseEvent {
  Digest digest;
  Verdict verdict;
};

/// Per-account checksums plus a digest of the key/certificate registry.
struct ChecksumAdvert {
  NodeId from = 0;
  Digest registry;
  std::map<AccountId, Digest> accounts;
};

struct DiffRequest {
  NodeId from = 0;
  bool registry = false;
  std::vector<AccountId> accounts;
};

struct DiffPayload {
  NodeId from = 0;
  std::vector<PublicKey> keys;
  std::vector<MoiDate> key_dates;
  std::vector<Bytes> certificates;
  /// Canonical transaction encodings only.
  std::vector<Bytes> transactions;
};

struct AbsorbReport {
  std::size_t new_transactions = 0;
  std::size_t duplicates = 0;
  std::size_t invalid = 0;
  bool blacklisted_sender = false;
};

/// One replica: a ledger, its quarantine queue, its blacklist and an
/// optional persistent log.
class Node {
 public:
  Node(NodeId id, NodeConfig config = {});

  NodeId id() const { return id_; }
  const NodeConfig& config() const { return config_; }
  const Ledger& ledger() const { return ledger_; }
  MoiDate clock() const { return clock_; }
  const std::vector<QuarantineEntry>& quarantine() const { return quarantine_; }

  /// Stores the recovery report of the initial log replay.
  const LoadResult& load_report() const { return load_report_; }

  AccountId publish_key(const PublicKey& key);
  CertificateVerdict publish_certificate(const Certificate& cert);

  /// Rejects on R1-R7 and R9 immediately; otherwise holds the check until
  /// now + tempo_delay and evaluates it again, balance included, at release.
  /// Moves the clock forward to `now` first (releasing anything due).
  SubmitResult submit(const Transaction& tx, MoiDate now);

  /// Advances the clock and releases every held check due by then, in
  /// (release, arrival) order.
  std::vector<ReleaseEvent> advance_to(MoiDate now);

  void mark_cleared(const Digest& digest);
  std::vector<AccountId> prune_inactive(std::uint32_t max_idle_minutes = kDefaultPruneIdleMinutes);

  void add_peer(NodeId peer) { peers_.insert(peer); }
  const std::set<NodeId>& peers() const { return peers_; }
  bool is_blacklisted(NodeId peer) const { return blacklist_.contains(peer); }
  const std::set<NodeId>& blacklist() const { return blacklist_; }
  /// Permanent for the lifetime of the node.
  void blacklist_peer(NodeId peer) { blacklist_.insert(peer); }

  ChecksumAdvert advert() const;
  DiffRequest diff_against(const ChecksumAdvert& remote) const;
  DiffPayload answer(const DiffRequest& request) const;
  /// Re-validates every received check (R1-R6) and merges the valid ones.
  /// A structurally invalid check blacklists the sender; balance conflicts
  /// only block the overdrawn account.
  AbsorbReport absorb(const DiffPayload& payload);

 private:
  void persist(const LogRecord& record);
  Digest registry_digest() const;

  NodeId id_;
  NodeConfig config_;
  Ledger ledger_;
  MoiDate clock_;
  std::vector<QuarantineEntry> quarantine_;
  std::uint64_t next_sequence_ = 0;
  std::set<NodeId> peers_;
  std::set<NodeId> blacklist_;
  std::unique_ptr<LogWriter> log_;
  LoadResult load_report_;
};

/// Blacklists `peer_id` if `offending_tx` breaks a structural rule
/// (R1-R6). Returns true when the peer was blacklisted.
bool detect_invalid_peer(Node& node, NodeId peer_id, const Transaction& offending_tx);

struct SyncResult {
  /// False when either side blacklists the other; nothing is exchanged.
  bool performed = false;
  std::size_t transferred = 0;
};

/// Pairwise pull-push anti-entropy: both nodes advertise checksums, request
/// the accounts that differ and merge what they receive.
SyncResult sync_round(Node& a, Node& b);

}  // namespace moi
