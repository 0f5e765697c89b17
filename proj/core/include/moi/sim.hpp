/*
 * sim.hpp
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
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moi/node.hpp"

namespace moi::sim {

/// Uniform delivery delay, in minutes, applied to every scheduled sync.
struct LinkDelay {
  std::uint32_t min_ticks = 0;
  std::uint32_t max_ticks = 0;
};

struct SimConfig {
  std::uint32_t node_count = 1;
  NodeConfig node;
  MoiDate start;
  LinkDelay delay;
  /// When set, node i persists to <storage_root>/node-<i>.log.
  std::optional<std::filesystem::path> storage_root;
};

/// Deterministic in-process network of full replicas driven by a virtual
/// minute clock. Same seed and same calls give the same trace.
class SimNetwork {
 public:
  SimNetwork(SimConfig config, std::uint64_t seed);

  std::size_t size() const { return nodes_.size(); }
  Node& node(NodeId id) { return nodes_.at(id); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const { return nodes_; }
  MoiDate now() const { return now_; }
  /// Minutes since the configured start.
  std::uint32_t step() const { return now_.minutes - config_.start.minutes; }

  void publish_key(const PublicKey& key, std::optional<NodeId> target = std::nullopt);
  void publish_certificate(const Certificate& cert, std::optional<NodeId> target = std::nullopt);

  SubmitResult submit(NodeId target, const Transaction& tx);

  /// Runs a round immediately unless the link is partitioned.
  SyncResult sync_now(NodeId a, NodeId b);
  /// Queues a round delivered after the link delay.
  void schedule_sync(NodeId a, NodeId b);

  /// Link is down until (exclusive) the given step.
  void partition(NodeId a, NodeId b, std::uint32_t until_step);
  bool is_partitioned(NodeId a, NodeId b) const;

  /// Moves minute by minute, releasing quarantines and delivering syncs.
  void advance(std::uint32_t minutes);
  void advance_to_step(std::uint32_t step);

  /// Every node syncs with one uniformly drawn other node. Returns the number
  /// of transactions moved.
  std::size_t gossip_round();
  /// Gossips until converged() or `max_rounds`. Returns rounds used.
  std::size_t gossip_until_quiescent(std::size_t max_rounds = 1000);
  /// Empty quarantines and identical registries and per-account checksums on
  /// every node that is not blacklisted by anyone.
  bool converged() const;

  const std::vector<std::string>& trace() const { return trace_; }
  std::string trace_text() const;
  void note(const std::string& line);

 private:
  struct PendingSync {
    NodeId a;
    NodeId b;
  };

  std::uint64_t draw(std::uint64_t bound);
  void tick();

  SimConfig config_;
  std::vector<Node> nodes_;
  MoiDate now_;
  std::mt19937_64 rng_;
  std::map<std::pair<MoiDate, std::uint64_t>, PendingSync> pending_;
  std::uint64_t next_event_ = 0;
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> partitions_;
  std::vector<std::string> trace_;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class CommandKind {
  submit,
  sync,
  partition,
  advance,
  gossip,
  quiesce,
  publish_key,
  publish_certificate,
  expect_balance,
  expect_blocked,
};

/// `target` empty means every node.
struct Command {
  std::size_t line = 0;
  std::optional<std::uint32_t> step;
  CommandKind kind = CommandKind::advance;
  std::optional<NodeId> target;
  NodeId peer = 0;
  std::uint32_t value = 0;
  std::string payload;
  AccountId account;
  CurrencyCode currency;
  Cents cents = 0;
  bool flag = false;
};

struct Scenario {
  std::uint32_t node_count = 1;
  bool test_mode = false;
  std::optional<PublicKey> authority_key;
  std::uint32_t quarantine_minutes = kDefaultQuarantineMinutes;
  MoiDate start;
  LinkDelay delay;
  std::vector<Command> commands;
};

/// Line-oriented script. Header directives (any order, before use):
///   nodes <n> | test-mode | master-key <base85> | quarantine <minutes>
///   start <iso-minute> | delay <min> <max>
/// Commands, optionally prefixed by `step <n>` (minutes after start):
///   submit <node> <base85-tx> | sync <a> <b> | partition <a> <b> until <n>
///   advance <minutes> | gossip <rounds> | quiesce
///   key <node|all> <base85-pk> | cert <node|all> <base85-cert>
///   expect-balance <node|all> <account> <currency> <amount>
///   expect-blocked <node|all> <account> yes|no
/// A line starting with `#`, or a standalone `#` word, starts a comment.
Scenario parse_scenario(std::string_view text);

struct SimulationResult {
  std::vector<std::string> trace;
  std::vector<Node> nodes;
  std::vector<std::string> failed_expectations;

  bool ok() const { return failed_expectations.empty(); }
};

SimulationResult run_simulation(const Scenario& scenario, std::uint64_t seed);

}  // namespace moi::sim
