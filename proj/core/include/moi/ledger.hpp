/*
 * ledger.hpp
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
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "moi/types.hpp"
#include "moi/wire.hpp"

namespace moi {

/// Acceptance rules for a digital check, in the order they are reported.
enum class Rule : std::uint8_t {
  version = 1,     // R1 protocol version known and allowed in this mode
  amount = 2,      // R2 non-zero amount
  self_send = 3,   // R3 sender differs from recipient
  future_date = 4, // R4 not dated after now
  unknown_sender = 5,  // R5 sender key published
  signature = 6,   // R6 signature verifies
  same_minute = 7, // R7 one outgoing check per sender per minute
  balance = 8,     // R8 sender stays above its floor
  duplicate = 9,   // R9 not already accepted
};

/// "R1".."R9".
std::string_view rule_tag(Rule rule);
/// Kebab-case name, e.g. "insufficient-funds".
std::string_view rule_name(Rule rule);

/// Subset of rules to evaluate.
class RuleMask {
 public:
  static constexpr RuleMask all() { return RuleMask(0x3FE); }
  /// R1-R6: what a peer must never forward.
  static constexpr RuleMask structural() { return RuleMask(0x07E); }
  /// Everything but the balance rule: checked when a check is first submitted.
  static constexpr RuleMask without_balance() { return all().without(Rule::balance); }

  constexpr bool has(Rule r) const { return bits_ & bit(r); }
  constexpr RuleMask without(Rule r) const { return RuleMask(bits_ & ~bit(r)); }

 private:
  constexpr explicit RuleMask(std::uint16_t bits) : bits_(bits) {}
  static constexpr std::uint16_t bit(Rule r) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(r));
  }
  std::uint16_t bits_;
};

struct Verdict {
  std::optional<Rule> rejected_by;

  static Verdict accept() { return {}; }
  static Verdict reject(Rule rule) { return {rule}; }

  bool accepted() const { return !rejected_by.has_value(); }
  explicit operator bool() const { return accepted(); }
  bool operator==(const Verdict&) const = default;
};

enum class CertificateRejection {
  version,
  no_authority,
  signature,
  expired,
  unknown_subject,
};

std::string_view to_string(CertificateRejection reason);

struct CertificateVerdict {
  std::optional<CertificateRejection> rejected_by;

  bool accepted() const { return !rejected_by.has_value(); }
  explicit operator bool() const { return accepted(); }
  bool operator==(const CertificateVerdict&) const = default;
};

enum class AccountKind { regular, ibank, registrar };

std::string_view to_string(AccountKind kind);

struct AccountRecord {
  AccountId id;
  PublicKey public_key;
  MoiDate first_seen;
  MoiDate last_activity;
};

struct StoredTransaction {
  Transaction tx;
  Bytes encoded;
  Digest digest;
  bool cleared = false;
};

struct LedgerConfig {
  /// Accept protocol versions 0x0-0x3 in addition to the trading versions.
  bool test_mode = false;
  /// Replaces the embedded master authority for every protocol version.
  std::optional<PublicKey> authority_key;
};

enum class LedgerErrc { invalid_public_key, id_collision, unknown_transaction };

class LedgerError : public std::runtime_error {
 public:
  LedgerError(LedgerErrc code, const char* what) : std::runtime_error(what), code_(code) {}
  LedgerErrc code() const noexcept { return code_; }

 private:
  LedgerErrc code_;
};

using BalanceKey = std::pair<AccountId, CurrencyCode>;
using BalanceMap = std::map<BalanceKey, Cents>;

/// Result of comparing the balance cache with a full fold, without mutating.
struct AuditReport {
  std::vector<BalanceKey> mismatches;
  std::set<AccountId> below_floor;

  bool consistent() const { return mismatches.empty(); }
};

/// Six months of minutes.
inline constexpr std::uint32_t kDefaultPruneIdleMinutes = 262'800;

/// Replicated state of one node: published keys, certificates, accepted
/// checks, and what is derived from them.
///
/// Balances are tracked per (account, currency). A check never moves money
/// between currencies. The sum over all accounts of every currency is zero
/// after each mutation.
///
/// Not synchronised; wrap in SharedLedger for concurrent readers.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {});

  const LedgerConfig& config() const { return config_; }

  /// Publishes a key. Idempotent for the same key; throws LedgerError for an
  /// invalid point or when another key already owns the 8-byte id.
  AccountId register_public_key(const PublicKey& key, MoiDate now);

  /// Accepts a certificate signed by the master authority whose deadline has
  /// not passed at `now`.
  CertificateVerdict register_certificate(const Certificate& cert, MoiDate now);
  /// Same checks without the deadline: certificates replicated from peers or
  /// replayed from storage may have expired since they were first accepted.
  CertificateVerdict admit_certificate(const Certificate& cert);

  /// Evaluates the rules in `rules`. Order: R1..R6, R9, R7, R8, so a
  /// byte-identical resubmission reports R9 rather than R7.
  Verdict validate(const Transaction& tx, MoiDate now, RuleMask rules = RuleMask::all()) const;

  /// Records a check that passed validate(). Returns its digest.
  Digest apply(const Transaction& tx);

  /// Records a check accepted by another node, skipping the balance and
  /// same-minute rules (the caller has checked the structural ones).
  /// Accounts pushed below their floor become blocked. Returns false for a
  /// duplicate.
  bool merge(const Transaction& tx);

  Cents balance(const AccountId& id, CurrencyCode currency) const;
  std::map<CurrencyCode, Cents> balances(const AccountId& id) const;
  const BalanceMap& balance_cache() const { return balances_; }
  /// Sum over all accounts for one currency.
  Cents total(CurrencyCode currency) const;

  /// Full fold over every stored check; does not touch the cache.
  BalanceMap fold_balances() const;
  AuditReport audit() const;
  /// Replaces the cache with a full fold and rebuilds the blocked set.
  BalanceMap recompute_all();

  /// SHA-256 over the canonical encodings of the account's checks, ordered
  /// by (date, signature bytes).
  Digest account_checksum(const AccountId& id) const;
  /// Ids with a published key or at least one check.
  std::vector<AccountId> known_accounts() const;

  void mark_cleared(const Digest& digest);
  bool is_cleared(const Digest& digest) const;

  /// Drops published keys that never transacted, hold no certificate, have
  /// a zero balance and have been idle at least `max_idle_minutes`.
  std::vector<AccountId> prune_inactive(MoiDate now,
                                        std::uint32_t max_idle_minutes = kDefaultPruneIdleMinutes);

  AccountKind kind(const AccountId& id, MoiDate at) const;
  /// Largest debt, in cents, granted for `currency` by a certificate valid at `at`.
  Cents debt_bound(const AccountId& id, CurrencyCode currency, MoiDate at) const;
  bool is_blocked(const AccountId& id) const { return blocked_.contains(id); }
  const std::set<AccountId>& blocked() const { return blocked_; }

  const std::map<AccountId, AccountRecord>& accounts() const { return accounts_; }
  const AccountRecord* find_account(const AccountId& id) const;
  const std::vector<Certificate>& certificates() const { return certificates_; }
  const std::map<Digest, StoredTransaction>& transactions() const { return transactions_; }
  const StoredTransaction* find_transaction(const Digest& digest) const;
  /// Checks where `id` is sender or recipient, canonical order.
  std::vector<const StoredTransaction*> account_transactions(const AccountId& id) const;

 private:
  struct OrderKey {
    MoiDate date;
    Signature signature;
    Digest digest;
    auto operator<=>(const OrderKey&) const = default;
  };

  std::optional<PublicKey> authority_for(ProtocolVersion version) const;
  bool version_allowed(ProtocolVersion version) const;
  Cents floor_for_blocking(const AccountId& id, CurrencyCode currency) const;
  void refresh_blocked(const AccountId& id);
  Digest insert(const Transaction& tx, Bytes encoded, Digest digest);

  LedgerConfig config_;
  std::map<AccountId, AccountRecord> accounts_;
  std::vector<Certificate> certificates_;
  std::map<AccountId, std::vector<std::size_t>> certificates_by_subject_;
  std::map<Digest, StoredTransaction> transactions_;
  std::map<AccountId, std::set<OrderKey>> by_account_;
  std::set<std::pair<AccountId, std::uint32_t>> sender_minutes_;
  BalanceMap balances_;
  std::set<AccountId> blocked_;
};

/// Single writer, many readers.
class SharedLedger {
 public:
  explicit SharedLedger(LedgerConfig config = {}) : ledger_(std::move(config)) {}

  template <typename F>
  decltype(auto) read(F&& f) const {
    std::shared_lock lock(mutex_);
    return std::forward<F>(f)(static_cast<const Ledger&>(ledger_));
  }

  template <typename F>
  decltype(auto) write(F&& f) {
    std::unique_lock lock(mutex_);
    return std::forward<F>(f)(ledger_);
  }

 private:
  mutable std::shared_mutex mutex_;
  Ledger ledger_;
};

}  // namespace moi
