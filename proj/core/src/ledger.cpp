/*
 * ledger.cpp
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

#include "moi/ledger.hpp"

#include <algorithm>

#include "moi/crypto.hpp"

namespace moi {

std::string_view rule_tag(Rule rule) {
  switch (rule) {
    case Rule::version: return "R1";
    case Rule::amount: return "R2";
    case Rule::self_send: return "R3";
    case Rule::future_date: return "R4";
    case Rule::unknown_sender: return "R5";
    case Rule::signature: return "R6";
    case Rule::same_minute: return "R7";
    case Rule::balance: return "R8";
    case Rule::duplicate: return "R9";
  }
  return "R?";
}

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::version: return "unsupported-version";
    case Rule::amount: return "zero-amount";
    case Rule::self_send: return "self-send";
    case Rule::future_date: return "future-date";
    case Rule::unknown_sender: return "unknown-sender";
    case Rule::signature: return "bad-signature";
    case Rule::same_minute: return "same-minute";
    case Rule::balance: return "insufficient-funds";
    case Rule::duplicate: return "duplicate";
  }
  return "unknown";
}

std::string_view to_string(CertificateRejection reason) {
  switch (reason) {
    case CertificateRejection::version: return "unsupported-version";
    case CertificateRejection::no_authority: return "no-authority";
    case CertificateRejection::signature: return "bad-signature";
    case CertificateRejection::expired: return "expired";
    case CertificateRejection::unknown_subject: return "unknown-subject";
  }
  return "unknown";
}

std::string_view to_string(AccountKind kind) {
  switch (kind) {
    case AccountKind::regular: return "regular";
    case AccountKind::ibank: return "i-bank";
    case AccountKind::registrar: return "registrar";
  }
  return "unknown";
}

Ledger::Ledger(LedgerConfig config) : config_(std::move(config)) {}

AccountId Ledger::register_public_key(const PublicKey& key, MoiDate now) {
  const AccountId id = derive_account_id(key);
  if (auto it = accounts_.find(id); it != accounts_.end()) {
    if (it->second.public_key != key) {
      throw LedgerError(LedgerErrc::id_collision, "account id already bound to another key");
    }
    return id;
  }
  if (!is_valid_public_key(key)) {
    throw LedgerError(LedgerErrc::invalid_public_key, "public key is not a P-521 point");
  }
  accounts_.emplace(id, AccountRecord{id, key, now, now});
  return id;
}

std::optional<PublicKey> Ledger::authority_for(ProtocolVersion version) const {
  if (config_.authority_key) return config_.authority_key;
  if (auto ma = master_authority_for(version)) return ma->public_key;
  return std::nullopt;
}

bool Ledger::version_allowed(ProtocolVersion version) const {
  if (version.is_reserved()) return false;
  return version.is_trading() || config_.test_mode;
}

CertificateVerdict Ledger::admit_certificate(const Certificate& cert) {
  if (!version_allowed(cert.version)) return {CertificateRejection::version};
  const auto authority = authority_for(cert.version);
  if (!authority) return {CertificateRejection::no_authority};
  if (!verify_certificate(cert, *authority)) return {CertificateRejection::signature};
  if (!accounts_.contains(cert.subject)) return {CertificateRejection::unknown_subject};

  if (std::find(certificates_.begin(), certificates_.end(), cert) == certificates_.end()) {
    certificates_by_subject_[cert.subject].push_back(certificates_.size());
    certificates_.push_back(cert);
    refresh_blocked(cert.subject);
  }
  return {};
}

CertificateVerdict Ledger::register_certificate(const Certificate& cert, MoiDate now) {
  if (cert.deadline < now) {
    // Signature problems take precedence over expiry in the report.
    if (!version_allowed(cert.version)) return {CertificateRejection::version};
    const auto authority = authority_for(cert.version);
    if (!authority) return {CertificateRejection::no_authority};
    if (!verify_certificate(cert, *authority)) return {CertificateRejection::signature};
    return {CertificateRejection::expired};
  }
  return admit_certificate(cert);
}

Cents Ledger::debt_bound(const AccountId& id, CurrencyCode currency, MoiDate at) const {
  Cents bound = 0;
  if (auto it = certificates_by_subject_.find(id); it != certificates_by_subject_.end()) {
    for (auto index : it->second) {
      const auto& cert = certificates_[index];
      if (cert.currency == currency && cert.deadline >= at) {
        bound = std::max(bound, cert.debt_bound_cents());
      }
    }
  }
  return bound;
}

Cents Ledger::floor_for_blocking(const AccountId& id, CurrencyCode currency) const {
  // Expired certificates still justify the debt they allowed.
  Cents bound = 0;
  if (auto it = certificates_by_subject_.find(id); it != certificates_by_subject_.end()) {
    for (auto index : it->second) {
      const auto& cert = certificates_[index];
      if (cert.currency == currency) bound = std::max(bound, cert.debt_bound_cents());
    }
  }
  return -bound;
}

AccountKind Ledger::kind(const AccountId& id, MoiDate at) const {
  auto it = certificates_by_subject_.find(id);
  if (it == certificates_by_subject_.end()) return AccountKind::regular;
  bool registrar = false;
  for (auto index : it->second) {
    const auto& cert = certificates_[index];
    if (cert.deadline < at) continue;
    if (cert.debt_kilo > 0) return AccountKind::ibank;
    registrar = true;
  }
  return registrar ? AccountKind::registrar : AccountKind::regular;
}

Verdict Ledger::validate(const Transaction& tx, MoiDate now, RuleMask rules) const {
  if (rules.has(Rule::version) && !version_allowed(tx.version)) {
    return Verdict::reject(Rule::version);
  }
  if (rules.has(Rule::amount) && tx.amount.cents == 0) return Verdict::reject(Rule::amount);
  if (rules.has(Rule::self_send) && tx.sender == tx.recipient) {
    return Verdict::reject(Rule::self_send);
  }
  if (rules.has(Rule::future_date) && tx.date > now) return Verdict::reject(Rule::future_date);

  const AccountRecord* sender = find_account(tx.sender);
  if (rules.has(Rule::unknown_sender) && !sender) return Verdict::reject(Rule::unknown_sender);
  if (rules.has(Rule::signature) && (!sender || !verify_transaction(tx, sender->public_key))) {
    return Verdict::reject(Rule::signature);
  }
  if (rules.has(Rule::duplicate)) {
    Bytes encoded;
    try {
      encoded = encode_transaction(tx);
    } catch (const CodecError&) {
      return Verdict::reject(Rule::version);
    }
    if (transactions_.contains(sha256(encoded))) return Verdict::reject(Rule::duplicate);
  }
  if (rules.has(Rule::same_minute) && sender_minutes_.contains({tx.sender, tx.date.minutes})) {
    return Verdict::reject(Rule::same_minute);
  }
  if (rules.has(Rule::balance)) {
    if (blocked_.contains(tx.sender)) return Verdict::reject(Rule::balance);
    const Cents after = balance(tx.sender, tx.currency) - static_cast<Cents>(tx.amount.cents);
    if (after < -debt_bound(tx.sender, tx.currency, tx.date)) {
      return Verdict::reject(Rule::balance);
    }
  }
  return Verdict::accept();
}

Digest Ledger::insert(const Transaction& tx, Bytes encoded, Digest digest) {
  const Cents amount = tx.amount.cents;
  balances_[{tx.sender, tx.currency}] -= amount;
  balances_[{tx.recipient, tx.currency}] += amount;

  by_account_[tx.sender].insert(OrderKey{tx.date, tx.signature, digest});
  by_account_[tx.recipient].insert(OrderKey{tx.date, tx.signature, digest});
  sender_minutes_.insert({tx.sender, tx.date.minutes});

  for (const auto& party : {tx.sender, tx.recipient}) {
    if (auto it = accounts_.find(party); it != accounts_.end()) {
      it->second.last_activity = std::max(it->second.last_activity, tx.date);
    }
  }
  transactions_.emplace(digest, StoredTransaction{tx, std::move(encoded), digest, false});
  refresh_blocked(tx.sender);
  refresh_blocked(tx.recipient);
  return digest;
}

Digest Ledger::apply(const Transaction& tx) {
  Bytes encoded = encode_transaction(tx);
  const Digest digest = sha256(encoded);
  if (transactions_.contains(digest)) return digest;
  return insert(tx, std::move(encoded), digest);
}

bool Ledger::merge(const Transaction& tx) {
  Bytes encoded = encode_transaction(tx);
  const Digest digest = sha256(encoded);
  if (transactions_.contains(digest)) return false;
  insert(tx, std::move(encoded), digest);
  return true;
}

void Ledger::refresh_blocked(const AccountId& id) {
  bool below = false;
  for (auto it = balances_.lower_bound({id, CurrencyCode{0}});
       it != balances_.end() && it->first.first == id; ++it) {
    if (it->second < floor_for_blocking(id, it->first.second)) {
      below = true;
      break;
    }
  }
  if (below) {
    blocked_.insert(id);
  } else {
    blocked_.erase(id);
  }
}

Cents Ledger::balance(const AccountId& id, CurrencyCode currency) const {
  auto it = balances_.find({id, currency});
  return it == balances_.end() ? 0 : it->second;
}

std::map<CurrencyCode, Cents> Ledger::balances(const AccountId& id) const {
  std::map<CurrencyCode, Cents> out;
  for (auto it = balances_.lower_bound({id, CurrencyCode{0}});
       it != balances_.end() && it->first.first == id; ++it) {
    out[it->first.second] = it->second;
  }
  return out;
}

Cents Ledger::total(CurrencyCode currency) const {
  Cents sum = 0;
  for (const auto& [key, value] : balances_) {
    if (key.second == currency) sum += value;
  }
  return sum;
}

BalanceMap Ledger::fold_balances() const {
  BalanceMap folded;
  for (const auto& [digest, stored] : transactions_) {
    const auto& tx = stored.tx;
    folded[{tx.sender, tx.currency}] -= tx.amount.cents;
    folded[{tx.recipient, tx.currency}] += tx.amount.cents;
  }
  return folded;
}

AuditReport Ledger::audit() const {
  AuditReport report;
  const BalanceMap folded = fold_balances();
  std::set<BalanceKey> keys;
  for (const auto& [key, value] : folded) keys.insert(key);
  for (const auto& [key, value] : balances_) keys.insert(key);
  for (const auto& key : keys) {
    auto f = folded.find(key);
    auto c = balances_.find(key);
    const Cents fv = f == folded.end() ? 0 : f->second;
    const Cents cv = c == balances_.end() ? 0 : c->second;
    if (fv != cv) report.mismatches.push_back(key);
    if (fv < floor_for_blocking(key.first, key.second)) report.below_floor.insert(key.first);
  }
  return report;
}

BalanceMap Ledger::recompute_all() {
  balances_ = fold_balances();
  blocked_.clear();
  for (const auto& [key, value] : balances_) {
    if (value < floor_for_blocking(key.first, key.second)) blocked_.insert(key.first);
  }
  return balances_;
}

Digest Ledger::account_checksum(const AccountId& id) const {
  Bytes concatenated;
  if (auto it = by_account_.find(id); it != by_account_.end()) {
    for (const auto& key : it->second) {
      const auto& encoded = transactions_.at(key.digest).encoded;
      concatenated.insert(concatenated.end(), encoded.begin(), encoded.end());
    }
  }
  return sha256(concatenated);
}

std::vector<AccountId> Ledger::known_accounts() const {
  std::set<AccountId> ids;
  for (const auto& [id, record] : accounts_) ids.insert(id);
  for (const auto& [id, keys] : by_account_) ids.insert(id);
  return {ids.begin(), ids.end()};
}

void Ledger::mark_cleared(const Digest& digest) {
  auto it = transactions_.find(digest);
  if (it == transactions_.end()) {
    throw LedgerError(LedgerErrc::unknown_transaction, "no transaction with that digest");
  }
  it->second.cleared = true;
}

bool Ledger::is_cleared(const Digest& digest) const {
  auto it = transactions_.find(digest);
  return it != transactions_.end() && it->second.cleared;
}

std::vector<AccountId> Ledger::prune_inactive(MoiDate now, std::uint32_t max_idle_minutes) {
  std::vector<AccountId> removed;
  for (auto it = accounts_.begin(); it != accounts_.end();) {
    const auto& [id, record] = *it;
    const bool has_transactions = by_account_.contains(id);
    const bool certified = certificates_by_subject_.contains(id);
    const auto held = balances(id);
    const bool zero_balance =
        std::all_of(held.begin(), held.end(), [](const auto& kv) { return kv.second == 0; });
    const bool idle = now.minutes >= record.last_activity.minutes &&
                      now.minutes - record.last_activity.minutes >= max_idle_minutes;
    if (!has_transactions && !certified && zero_balance && idle) {
      removed.push_back(id);
      it = accounts_.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

const AccountRecord* Ledger::find_account(const AccountId& id) const {
  auto it = accounts_.find(id);
  return it == accounts_.end() ? nullptr : &it->second;
}

const StoredTransaction* Ledger::find_transaction(const Digest& digest) const {
  auto it = transactions_.find(digest);
  return it == transactions_.end() ? nullptr : &it->second;
}

std::vector<const StoredTransaction*> Ledger::account_transactions(const AccountId& id) const {
  std::vector<const StoredTransaction*> out;
  if (auto it = by_account_.find(id); it != by_account_.end()) {
    out.reserve(it->second.size());
    for (const auto& key : it->second) out.push_back(&transactions_.at(key.digest));
  }
  return out;
}

}  // namespace moi
