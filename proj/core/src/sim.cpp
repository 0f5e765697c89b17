/*
 * sim.cpp
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

#include "moi/sim.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "moi/base85.hpp"
#include "moi/crypto.hpp"
#include "moi/date.hpp"

namespace moi::sim {

namespace {

std::string short_digest(const Digest& d) { return to_hex(ByteView(d.bytes.data(), 4)); }

std::string verdict_text(const Verdict& v) {
  if (v) return "accepted";
  return "rejected " + std::string(rule_tag(*v.rejected_by)) + " " +
         std::string(rule_name(*v.rejected_by));
}

std::pair<NodeId, NodeId> link(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

SimNetwork::SimNetwork(SimConfig config, std::uint64_t seed)
    : config_(std::move(config)), now_(config_.start), rng_(seed) {
  nodes_.reserve(config_.node_count);
  for (NodeId i = 0; i < config_.node_count; ++i) {
    NodeConfig nc = config_.node;
    if (config_.storage_root) {
      nc.log_path = *config_.storage_root / ("node-" + std::to_string(i) + ".log");
    }
    nodes_.emplace_back(i, std::move(nc));
    nodes_.back().advance_to(now_);
  }
  for (auto& n : nodes_) {
    for (NodeId j = 0; j < config_.node_count; ++j) {
      if (j != n.id()) n.add_peer(j);
    }
  }
}

std::uint64_t SimNetwork::draw(std::uint64_t bound) {
  // Plain modulo keeps traces identical across standard library versions.
  return bound == 0 ? 0 : rng_() % bound;
}

void SimNetwork::note(const std::string& line) {
  trace_.push_back("[t=" + std::to_string(step()) + "] " + line);
}

std::string SimNetwork::trace_text() const {
  std::string out;
  for (const auto& line : trace_) {
    out += line;
    out += '\n';
  }
  return out;
}

void SimNetwork::publish_key(const PublicKey& key, std::optional<NodeId> target) {
  for (auto& n : nodes_) {
    if (target && *target != n.id()) continue;
    const AccountId id = n.publish_key(key);
    note("node " + std::to_string(n.id()) + " key " + account_id_to_text(id));
  }
}

void SimNetwork::publish_certificate(const Certificate& cert, std::optional<NodeId> target) {
  for (auto& n : nodes_) {
    if (target && *target != n.id()) continue;
    const auto verdict = n.publish_certificate(cert);
    note("node " + std::to_string(n.id()) + " cert " + account_id_to_text(cert.subject) + " " +
         (verdict ? std::string("accepted") : "rejected " + std::string(to_string(*verdict.rejected_by))));
  }
}

SubmitResult SimNetwork::submit(NodeId target, const Transaction& tx) {
  Node& n = nodes_.at(target);
  const SubmitResult result = n.submit(tx, now_);
  if (result.queued()) {
    note("node " + std::to_string(target) + " submit " + short_digest(result.digest) +
         " queued release=+" + std::to_string(result.release.minutes - config_.start.minutes));
  } else {
    note("node " + std::to_string(target) + " submit " + short_digest(result.digest) + " " +
         verdict_text(Verdict::reject(*result.rejected_by)));
  }
  for (const auto& ev : n.advance_to(now_)) {
    note("node " + std::to_string(target) + " release " + short_digest(ev.digest) + " " +
         verdict_text(ev.verdict));
  }
  return result;
}

SyncResult SimNetwork::sync_now(NodeId a, NodeId b) {
  const std::string pair = std::to_string(a) + " " + std::to_string(b);
  if (is_partitioned(a, b)) {
    note("sync " + pair + " dropped partition");
    return {};
  }
  Node& na = nodes_.at(a);
  Node& nb = nodes_.at(b);
  const auto blocked_a = na.blacklist().size();
  const auto blocked_b = nb.blacklist().size();
  const SyncResult result = sync_round(na, nb);
  if (!result.performed) {
    note("sync " + pair + " refused blacklist");
    return result;
  }
  note("sync " + pair + " transferred " + std::to_string(result.transferred));
  if (na.blacklist().size() != blocked_a) note("node " + std::to_string(a) + " blacklists " + std::to_string(b));
  if (nb.blacklist().size() != blocked_b) note("node " + std::to_string(b) + " blacklists " + std::to_string(a));
  return result;
}

void SimNetwork::schedule_sync(NodeId a, NodeId b) {
  const auto span = config_.delay.max_ticks >= config_.delay.min_ticks
                        ? config_.delay.max_ticks - config_.delay.min_ticks
                        : 0;
  const auto delay = config_.delay.min_ticks + static_cast<std::uint32_t>(draw(span + 1ull));
  if (delay == 0) {
    sync_now(a, b);
    return;
  }
  pending_.emplace(std::pair{MoiDate{now_.minutes + delay}, next_event_++}, PendingSync{a, b});
  note("sync " + std::to_string(a) + " " + std::to_string(b) + " scheduled +" + std::to_string(delay));
}

void SimNetwork::partition(NodeId a, NodeId b, std::uint32_t until_step) {
  partitions_[link(a, b)] = until_step;
  note("partition " + std::to_string(a) + " " + std::to_string(b) + " until " +
       std::to_string(until_step));
}

bool SimNetwork::is_partitioned(NodeId a, NodeId b) const {
  auto it = partitions_.find(link(a, b));
  return it != partitions_.end() && step() < it->second;
}

void SimNetwork::tick() {
  now_ = MoiDate{now_.minutes + 1};
  for (auto& n : nodes_) {
    for (const auto& ev : n.advance_to(now_)) {
      note("node " + std::to_string(n.id()) + " release " + short_digest(ev.digest) + " " +
           verdict_text(ev.verdict));
    }
  }
  while (!pending_.empty() && pending_.begin()->first.first <= now_) {
    const PendingSync s = pending_.begin()->second;
    pending_.erase(pending_.begin());
    sync_now(s.a, s.b);
  }
}

void SimNetwork::advance(std::uint32_t minutes) {
  for (std::uint32_t i = 0; i < minutes; ++i) tick();
}

void SimNetwork::advance_to_step(std::uint32_t target) {
  while (step() < target) tick();
}

std::size_t SimNetwork::gossip_round() {
  std::size_t moved = 0;
  const auto n = nodes_.size();
  if (n < 2) return 0;
  for (NodeId i = 0; i < n; ++i) {
    auto j = static_cast<NodeId>(draw(n - 1));
    if (j >= i) ++j;
    moved += sync_now(i, j).transferred;
  }
  return moved;
}

bool SimNetwork::converged() const {
  for (const auto& n : nodes_) {
    if (!n.quarantine().empty()) return false;
  }
  if (nodes_.size() < 2) return true;
  const ChecksumAdvert reference = nodes_.front().advert();
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const ChecksumAdvert other = nodes_[i].advert();
    if (other.registry != reference.registry || other.accounts != reference.accounts) return false;
  }
  return true;
}

std::size_t SimNetwork::gossip_until_quiescent(std::size_t max_rounds) {
  std::size_t rounds = 0;
  while (!converged() && rounds < max_rounds) {
    bool holding = false;
    for (const auto& n : nodes_) holding = holding || !n.quarantine().empty();
    if (holding) tick();
    gossip_round();
    ++rounds;
  }
  note("quiescent after " + std::to_string(rounds) + " rounds" + (converged() ? "" : " (not converged)"));
  return rounds;
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > begin) words.push_back(line.substr(begin, i - begin));
  }
  return words;
}

std::uint32_t parse_u32(std::string_view word, std::size_t line, const char* what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ScenarioError(line, std::string("expected ") + what + ", got '" + std::string(word) + "'");
  }
  return value;
}

std::optional<NodeId> parse_target(std::string_view word, std::size_t line) {
  if (word == "all") return std::nullopt;
  return parse_u32(word, line, "node index");
}

void expect_words(const std::vector<std::string_view>& w, std::size_t n, std::size_t line,
                  const char* usage) {
  if (w.size() != n) throw ScenarioError(line, std::string("usage: ") + usage);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario scenario;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto w = split_words(line);
    // '#' is a Z85 digit: a comment is a line starting with '#' or a
    // standalone '#' word.
    if (!w.empty() && w.front().front() == '#') w.clear();
    if (auto hash = std::find(w.begin(), w.end(), "#"); hash != w.end()) w.erase(hash, w.end());
    if (w.empty()) continue;

    Command cmd;
    cmd.line = line_no;
    if (w[0] == "step") {
      if (w.size() < 3) throw ScenarioError(line_no, "usage: step <n> <command>");
      cmd.step = parse_u32(w[1], line_no, "step number");
      w.erase(w.begin(), w.begin() + 2);
    }
    const auto verb = w[0];
    try {
      if (verb == "nodes") {
        expect_words(w, 2, line_no, "nodes <count>");
        scenario.node_count = parse_u32(w[1], line_no, "node count");
        if (scenario.node_count == 0) throw ScenarioError(line_no, "at least one node required");
        continue;
      }
      if (verb == "test-mode") {
        scenario.test_mode = true;
        continue;
      }
      if (verb == "master-key") {
        expect_words(w, 2, line_no, "master-key <base85-public-key>");
        scenario.authority_key = public_key_from_text(w[1]);
        continue;
      }
      if (verb == "quarantine") {
        expect_words(w, 2, line_no, "quarantine <minutes>");
        scenario.quarantine_minutes = parse_u32(w[1], line_no, "minutes");
        continue;
      }
      if (verb == "start") {
        expect_words(w, 2, line_no, "start <iso-minute>");
        auto date = parse_iso_minute(w[1]);
        if (!date) throw ScenarioError(line_no, "bad date '" + std::string(w[1]) + "'");
        scenario.start = *date;
        continue;
      }
      if (verb == "delay") {
        expect_words(w, 3, line_no, "delay <min> <max>");
        scenario.delay = {parse_u32(w[1], line_no, "ticks"), parse_u32(w[2], line_no, "ticks")};
        if (scenario.delay.max_ticks < scenario.delay.min_ticks) {
          throw ScenarioError(line_no, "delay max below min");
        }
        continue;
      }

      if (verb == "submit") {
        expect_words(w, 3, line_no, "submit <node> <base85-tx>");
        cmd.kind = CommandKind::submit;
        cmd.target = parse_u32(w[1], line_no, "node index");
        cmd.payload = std::string(w[2]);
        transaction_from_text(cmd.payload);
      } else if (verb == "sync") {
        expect_words(w, 3, line_no, "sync <a> <b>");
        cmd.kind = CommandKind::sync;
        cmd.target = parse_u32(w[1], line_no, "node index");
        cmd.peer = parse_u32(w[2], line_no, "node index");
      } else if (verb == "partition") {
        if (w.size() != 5 || w[3] != "until") {
          throw ScenarioError(line_no, "usage: partition <a> <b> until <n>");
        }
        cmd.kind = CommandKind::partition;
        cmd.target = parse_u32(w[1], line_no, "node index");
        cmd.peer = parse_u32(w[2], line_no, "node index");
        cmd.value = parse_u32(w[4], line_no, "step number");
      } else if (verb == "advance") {
        expect_words(w, 2, line_no, "advance <minutes>");
        cmd.kind = CommandKind::advance;
        cmd.value = parse_u32(w[1], line_no, "minutes");
      } else if (verb == "gossip") {
        expect_words(w, 2, line_no, "gossip <rounds>");
        cmd.kind = CommandKind::gossip;
        cmd.value = parse_u32(w[1], line_no, "rounds");
      } else if (verb == "quiesce") {
        expect_words(w, 1, line_no, "quiesce");
        cmd.kind = CommandKind::quiesce;
      } else if (verb == "key") {
        expect_words(w, 3, line_no, "key <node|all> <base85-public-key>");
        cmd.kind = CommandKind::publish_key;
        cmd.target = parse_target(w[1], line_no);
        cmd.payload = std::string(w[2]);
        public_key_from_text(cmd.payload);
      } else if (verb == "cert") {
        expect_words(w, 3, line_no, "cert <node|all> <base85-certificate>");
        cmd.kind = CommandKind::publish_certificate;
        cmd.target = parse_target(w[1], line_no);
        cmd.payload = std::string(w[2]);
        certificate_from_text(cmd.payload);
      } else if (verb == "expect-balance") {
        expect_words(w, 5, line_no, "expect-balance <node|all> <account> <currency> <amount>");
        cmd.kind = CommandKind::expect_balance;
        cmd.target = parse_target(w[1], line_no);
        cmd.account = account_id_from_text(w[2]);
        auto currency = parse_currency(w[3]);
        auto cents = parse_cents(w[4]);
        if (!currency || !cents) throw ScenarioError(line_no, "bad currency or amount");
        cmd.currency = *currency;
        cmd.cents = *cents;
      } else if (verb == "expect-blocked") {
        expect_words(w, 4, line_no, "expect-blocked <node|all> <account> yes|no");
        cmd.kind = CommandKind::expect_blocked;
        cmd.target = parse_target(w[1], line_no);
        cmd.account = account_id_from_text(w[2]);
        if (w[3] != "yes" && w[3] != "no") throw ScenarioError(line_no, "expected yes or no");
        cmd.flag = w[3] == "yes";
      } else {
        throw ScenarioError(line_no, "unknown command '" + std::string(verb) + "'");
      }
    } catch (const CodecError& e) {
      throw ScenarioError(line_no, e.what());
    }
    scenario.commands.push_back(std::move(cmd));
  }

  for (const auto& cmd : scenario.commands) {
    auto check = [&](NodeId n) {
      if (n >= scenario.node_count) throw ScenarioError(cmd.line, "node index out of range");
    };
    if (cmd.target) check(*cmd.target);
    if (cmd.kind == CommandKind::sync || cmd.kind == CommandKind::partition) {
      check(cmd.peer);
      if (cmd.peer == *cmd.target) throw ScenarioError(cmd.line, "a node cannot sync with itself");
    }
  }
  return scenario;
}

SimulationResult run_simulation(const Scenario& scenario, std::uint64_t seed) {
  SimConfig config;
  config.node_count = scenario.node_count;
  config.node.ledger.test_mode = scenario.test_mode;
  config.node.ledger.authority_key = scenario.authority_key;
  config.node.quarantine_minutes = scenario.quarantine_minutes;
  config.start = scenario.start;
  config.delay = scenario.delay;
  SimNetwork net(config, seed);

  SimulationResult result;
  auto each_target = [&](const Command& cmd, auto&& fn) {
    for (NodeId i = 0; i < net.size(); ++i) {
      if (!cmd.target || *cmd.target == i) fn(net.node(i));
    }
  };

  for (const auto& cmd : scenario.commands) {
    if (cmd.step) {
      if (*cmd.step < net.step()) {
        throw ScenarioError(cmd.line, "step " + std::to_string(*cmd.step) + " is in the past");
      }
      net.advance_to_step(*cmd.step);
    }
    switch (cmd.kind) {
      case CommandKind::submit:
        net.submit(*cmd.target, transaction_from_text(cmd.payload));
        break;
      case CommandKind::sync:
        net.schedule_sync(*cmd.target, cmd.peer);
        break;
      case CommandKind::partition:
        net.partition(*cmd.target, cmd.peer, cmd.value);
        break;
      case CommandKind::advance:
        net.advance(cmd.value);
        break;
      case CommandKind::gossip:
        for (std::uint32_t r = 0; r < cmd.value; ++r) net.gossip_round();
        break;
      case CommandKind::quiesce:
        net.gossip_until_quiescent();
        break;
      case CommandKind::publish_key:
        net.publish_key(public_key_from_text(cmd.payload), cmd.target);
        break;
      case CommandKind::publish_certificate:
        net.publish_certificate(certificate_from_text(cmd.payload), cmd.target);
        break;
      case CommandKind::expect_balance:
        each_target(cmd, [&](const Node& n) {
          const Cents actual = n.ledger().balance(cmd.account, cmd.currency);
          const bool ok = actual == cmd.cents;
          net.note("expect node " + std::to_string(n.id()) + " balance " +
                   account_id_to_text(cmd.account) + " " + cmd.currency.name() + " " +
                   format_cents(cmd.cents) + (ok ? " ok" : " FAILED actual " + format_cents(actual)));
          if (!ok) {
            result.failed_expectations.push_back(
                "line " + std::to_string(cmd.line) + ": node " + std::to_string(n.id()) +
                " balance " + format_cents(actual) + " != " + format_cents(cmd.cents));
          }
        });
        break;
      case CommandKind::expect_blocked:
        each_target(cmd, [&](const Node& n) {
          const bool actual = n.ledger().is_blocked(cmd.account);
          const bool ok = actual == cmd.flag;
          net.note("expect node " + std::to_string(n.id()) + " blocked " +
                   account_id_to_text(cmd.account) + (cmd.flag ? " yes" : " no") +
                   (ok ? " ok" : " FAILED"));
          if (!ok) {
            result.failed_expectations.push_back("line " + std::to_string(cmd.line) + ": node " +
                                                 std::to_string(n.id()) + " blocked state differs");
          }
        });
        break;
    }
  }

  result.trace = net.trace();
  result.nodes.reserve(net.size());
  for (NodeId i = 0; i < net.size(); ++i) result.nodes.push_back(std::move(net.node(i)));
  return result;
}

}  // namespace moi::sim
