/*
 * node.cpp
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

#include "moi/node.hpp"

#include <algorithm>
#include <tuple>

#include "moi/crypto.hpp"

namespace moi {

std::uint32_t tempo_delay(MoiDate tx_date, MoiDate now, std::uint32_t quarantine_minutes) {
  if (tx_date >= now) return quarantine_minutes;
  const std::uint32_t age = now.minutes - tx_date.minutes;
  return age >= quarantine_minutes ? 0 : quarantine_minutes - age;
}

Node::Node(NodeId id, NodeConfig config)
    : id_(id), config_(std::move(config)), ledger_(config_.ledger) {
  if (config_.log_path) {
    load_report_ = load_log(*config_.log_path);
    replay(ledger_, load_report_.records);
    for (const auto& [digest, stored] : ledger_.transactions()) {
      clock_ = std::max(clock_, stored.tx.date);
    }
    log_ = std::make_unique<LogWriter>(*config_.log_path);
    if (load_report_.truncated) log_->truncate(load_report_.valid_bytes);
  }
}

void Node::persist(const LogRecord& record) {
  if (log_) log_->append(record);
}

AccountId Node::publish_key(const PublicKey& key) {
  const bool known = ledger_.find_account(derive_account_id(key)) != nullptr;
  const AccountId id = ledger_.register_public_key(key, clock_);
  if (!known) persist(public_key_record(key, clock_));
  return id;
}

CertificateVerdict Node::publish_certificate(const Certificate& cert) {
  const auto before = ledger_.certificates().size();
  auto verdict = ledger_.register_certificate(cert, clock_);
  if (verdict && ledger_.certificates().size() != before) persist(certificate_record(cert));
  return verdict;
}

SubmitResult Node::submit(const Transaction& tx, MoiDate now) {
  clock_ = std::max(clock_, now);
  SubmitResult result;
  try {
    result.digest = sha256(encode_transaction(tx));
  } catch (const CodecError&) {
    result.rejected_by = Rule::version;
    return result;
  }

  const Verdict verdict = ledger_.validate(tx, clock_, RuleMask::without_balance());
  if (!verdict) {
    result.rejected_by = verdict.rejected_by;
    return result;
  }
  for (const auto& held : quarantine_) {
    if (held.digest == result.digest) {
      result.rejected_by = Rule::duplicate;
      return result;
    }
    if (held.tx.sender == tx.sender && held.tx.date == tx.date) {
      result.rejected_by = Rule::same_minute;
      return result;
    }
  }

  result.release = MoiDate{clock_.minutes + tempo_delay(tx.date, clock_, config_.quarantine_minutes)};
  quarantine_.push_back({tx, result.digest, result.release, next_sequence_++});
  return result;
}

std::vector<ReleaseEvent> Node::advance_to(MoiDate now) {
  clock_ = std::max(clock_, now);
  std::vector<QuarantineEntry> due;
  auto split = std::stable_partition(quarantine_.begin(), quarantine_.end(),
                                     [&](const auto& e) { return e.release > clock_; });
  due.assign(std::make_move_iterator(split), std::make_move_iterator(quarantine_.end()));
  quarantine_.erase(split, quarantine_.end());
  std::sort(due.begin(), due.end(), [](const auto& a, const auto& b) {
    return std::tie(a.release, a.sequence) < std::tie(b.release, b.sequence);
  });

  std::vector<ReleaseEvent> events;
  for (const auto& entry : due) {
    // The signature was checked on arrival and the bytes cannot change.
    const Verdict verdict =
        ledger_.validate(entry.tx, entry.release, RuleMask::all().without(Rule::signature));
    if (verdict) {
      ledger_.apply(entry.tx);
      persist(transaction_record(entry.tx));
    }
    events.push_back({entry.digest, verdict});
  }
  return events;
}

void Node::mark_cleared(const Digest& digest) {
  const bool was = ledger_.is_cleared(digest);
  ledger_.mark_cleared(digest);
  if (!was) persist(cleared_record(digest));
}

std::vector<AccountId> Node::prune_inactive(std::uint32_t max_idle_minutes) {
  auto removed = ledger_.prune_inactive(clock_, max_idle_minutes);
  if (!removed.empty() && log_) log_->rewrite(snapshot_records(ledger_));
  return removed;
}

Digest Node::registry_digest() const {
  Bytes all;
  for (const auto& [id, account] : ledger_.accounts()) {
    all.insert(all.end(), account.public_key.bytes.begin(), account.public_key.bytes.end());
  }
  std::vector<Bytes> certs;
  for (const auto& cert : ledger_.certificates()) certs.push_back(encode_certificate(cert));
  std::sort(certs.begin(), certs.end());
  for (const auto& c : certs) all.insert(all.end(), c.begin(), c.end());
  return sha256(all);
}

ChecksumAdvert Node::advert() const {
  ChecksumAdvert advert;
  advert.from = id_;
  advert.registry = registry_digest();
  for (const auto& id : ledger_.known_accounts()) {
    advert.accounts.emplace(id, ledger_.account_checksum(id));
  }
  return advert;
}

DiffRequest Node::diff_against(const ChecksumAdvert& remote) const {
  DiffRequest request;
  request.from = id_;
  request.registry = remote.registry != registry_digest();
  for (const auto& [id, digest] : remote.accounts) {
    if (ledger_.account_checksum(id) != digest) request.accounts.push_back(id);
  }
  return request;
}

DiffPayload Node::answer(const DiffRequest& request) const {
  DiffPayload payload;
  payload.from = id_;
  if (request.registry) {
    for (const auto& [id, account] : ledger_.accounts()) {
      payload.keys.push_back(account.public_key);
      payload.key_dates.push_back(account.first_seen);
    }
    for (const auto& cert : ledger_.certificates()) {
      payload.certificates.push_back(encode_certificate(cert));
    }
  }
  std::set<Digest> sent;
  for (const auto& id : request.accounts) {
    for (const auto* stored : ledger_.account_transactions(id)) {
      if (sent.insert(stored->digest).second) payload.transactions.push_back(stored->encoded);
    }
  }
  return payload;
}

AbsorbReport Node::absorb(const DiffPayload& payload) {
  AbsorbReport report;
  if (blacklist_.contains(payload.from)) return report;
  auto reject_peer = [&] {
    ++report.invalid;
    report.blacklisted_sender = true;
    blacklist_peer(payload.from);
  };

  for (std::size_t i = 0; i < payload.keys.size(); ++i) {
    const auto& key = payload.keys[i];
    if (ledger_.find_account(derive_account_id(key))) continue;
    const MoiDate seen = i < payload.key_dates.size() ? payload.key_dates[i] : clock_;
    try {
      ledger_.register_public_key(key, seen);
      persist(public_key_record(key, seen));
    } catch (const LedgerError& e) {
      // A colliding id is a local conflict, not misbehaviour; an invalid
      // point never came from an honest node.
      if (e.code() == LedgerErrc::invalid_public_key) {
        reject_peer();
        return report;
      }
    }
  }

  for (const auto& encoded : payload.certificates) {
    try {
      const Certificate cert = decode_certificate(encoded);
      const auto before = ledger_.certificates().size();
      if (!ledger_.admit_certificate(cert)) {
        reject_peer();
        return report;
      }
      if (ledger_.certificates().size() != before) persist(certificate_record(cert));
    } catch (const CodecError&) {
      reject_peer();
      return report;
    }
  }

  std::vector<Transaction> received;
  received.reserve(payload.transactions.size());
  for (const auto& encoded : payload.transactions) {
    try {
      received.push_back(decode_transaction(encoded));
    } catch (const CodecError&) {
      reject_peer();
      return report;
    }
  }
  std::sort(received.begin(), received.end(), [](const auto& a, const auto& b) {
    return std::tie(a.date, a.signature) < std::tie(b.date, b.signature);
  });

  for (const auto& tx : received) {
    const Digest digest = sha256(encode_transaction(tx));
    if (ledger_.find_transaction(digest)) {
      ++report.duplicates;
      continue;
    }
    if (detect_invalid_peer(*this, payload.from, tx)) {
      ++report.invalid;
      report.blacklisted_sender = true;
      break;
    }
    ledger_.merge(tx);
    persist(transaction_record(tx));
    std::erase_if(quarantine_, [&](const auto& e) { return e.digest == digest; });
    ++report.new_transactions;
  }
  if (report.new_transactions > 0) ledger_.recompute_all();
  return report;
}

bool detect_invalid_peer(Node& node, NodeId peer_id, const Transaction& offending_tx) {
  const Verdict verdict = node.ledger().validate(offending_tx, node.clock(), RuleMask::structural());
  if (verdict) return false;
  node.blacklist_peer(peer_id);
  return true;
}

SyncResult sync_round(Node& a, Node& b) {
  if (a.is_blacklisted(b.id()) || b.is_blacklisted(a.id())) return {};
  const ChecksumAdvert from_a = a.advert();
  const ChecksumAdvert from_b = b.advert();
  const DiffPayload to_b = a.answer(b.diff_against(from_a));
  const DiffPayload to_a = b.answer(a.diff_against(from_b));
  const AbsorbReport at_b = b.absorb(to_b);
  const AbsorbReport at_a = a.absorb(to_a);
  return {true, at_a.new_transactions + at_b.new_transactions};
}

}  // namespace moi
