/*
 * node_test.cpp
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

#include "moi/node.hpp"
#include "test_support.hpp"

namespace moi {
namespace {

using testing::at;
using testing::keypair;
using testing::make_check;

TEST(Tempo, DelayFormula) {
  EXPECT_EQ(tempo_delay(at(10), at(10), 2), 2u);
  EXPECT_EQ(tempo_delay(at(9), at(10), 2), 1u);
  EXPECT_EQ(tempo_delay(at(8), at(10), 2), 0u);
  EXPECT_EQ(tempo_delay(at(0), at(10), 2), 0u);
  EXPECT_EQ(tempo_delay(at(10), at(10), 0), 0u);
  EXPECT_EQ(tempo_delay(at(5), at(10), 8), 3u);
}

class NodeTest : public ::testing::Test {
 protected:
  testing::World world;
  KeyPair bank = keypair(100);
  KeyPair alice = keypair(101);
  KeyPair bob = keypair(102);
  KeyPair carol = keypair(103);

  Node make_node(NodeId id, NodeConfig config) {
    Node node(id, std::move(config));
    node.advance_to(at(0));
    for (const auto* p : {&bank, &alice, &bob, &carol}) node.publish_key(p->public_key);
    EXPECT_TRUE(node.publish_certificate(world.certify(bank.id(), 10)));
    return node;
  }
  Node make_node(NodeId id) { return make_node(id, world.node_config()); }

  static Verdict run(Node& node, const Transaction& tx, MoiDate now) {
    const SubmitResult r = node.submit(tx, now);
    if (!r.queued()) return Verdict::reject(*r.rejected_by);
    for (const auto& ev : node.advance_to(r.release)) {
      if (ev.digest == r.digest) return ev.verdict;
    }
    ADD_FAILURE() << "not released";
    return Verdict::reject(Rule::version);
  }
};

TEST_F(NodeTest, FreshCheckIsQuarantinedForTwoMinutes) {
  Node node = make_node(0);
  const Transaction tx = make_check(bank, alice.id(), 1'000, at(5));
  const SubmitResult r = node.submit(tx, at(5));
  ASSERT_TRUE(r.queued());
  EXPECT_EQ(r.release, at(7));
  EXPECT_EQ(node.quarantine().size(), 1u);
  EXPECT_EQ(node.ledger().balance(alice.id(), kCurrencyEur), 0);
  EXPECT_TRUE(node.advance_to(at(6)).empty());
  const auto events = node.advance_to(at(7));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_TRUE(events[0].verdict);
  EXPECT_EQ(node.ledger().balance(alice.id(), kCurrencyEur), 1'000);
  EXPECT_TRUE(node.quarantine().empty());
}

TEST_F(NodeTest, OldCheckReleasesImmediately) {
  Node node = make_node(0);
  const SubmitResult r = node.submit(make_check(bank, alice.id(), 1'000, at(1)), at(50));
  ASSERT_TRUE(r.queued());
  EXPECT_EQ(r.release, at(50));
}

TEST_F(NodeTest, StructuralRejectionsAreImmediate) {
  Node node = make_node(0);
  const SubmitResult future = node.submit(make_check(bank, alice.id(), 1, at(9)), at(8));
  EXPECT_EQ(future.rejected_by, Rule::future_date);
  EXPECT_EQ(node.submit(make_check(bank, alice.id(), 0, at(8)), at(8)).rejected_by, Rule::amount);
  EXPECT_TRUE(node.quarantine().empty());

  // Unfunded sender passes submission; balance is judged at release.
  const SubmitResult overspend = node.submit(make_check(alice, bob.id(), 1, at(8)), at(8));
  ASSERT_TRUE(overspend.queued());
  const auto events = node.advance_to(overspend.release);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].verdict.rejected_by, Rule::balance);
}

TEST_F(NodeTest, QuarantineDetectsDuplicatesAndSameMinute) {
  Node node = make_node(0);
  const Transaction tx = make_check(bank, alice.id(), 1'000, at(5));
  ASSERT_TRUE(node.submit(tx, at(5)).queued());
  EXPECT_EQ(node.submit(tx, at(5)).rejected_by, Rule::duplicate);
  EXPECT_EQ(node.submit(make_check(bank, bob.id(), 1'000, at(5)), at(5)).rejected_by, Rule::same_minute);
}

TEST_F(NodeTest, SecondConflictingSpendFailsAtRelease) {
  Node node = make_node(0);
  ASSERT_TRUE(run(node, make_check(bank, alice.id(), 1'000, at(1)), at(1)));
  const SubmitResult first = node.submit(make_check(alice, bob.id(), 800, at(10)), at(10));
  const SubmitResult second = node.submit(make_check(alice, carol.id(), 800, at(11)), at(11));
  ASSERT_TRUE(first.queued() && second.queued());
  const auto events = node.advance_to(at(20));
  ASSERT_EQ(events.size(), 2u);
  EXPECT_TRUE(events[0].verdict);
  EXPECT_EQ(events[1].verdict.rejected_by, Rule::balance);
  EXPECT_EQ(node.ledger().balance(alice.id(), kCurrencyEur), 200);
}

TEST_F(NodeTest, SyncOfIdenticalNodesTransfersNothing) {
  Node a = make_node(0);
  Node b = make_node(1);
  const SyncResult r = sync_round(a, b);
  EXPECT_TRUE(r.performed);
  EXPECT_EQ(r.transferred, 0u);
}

TEST_F(NodeTest, SyncPropagatesOneTransaction) {
  Node a = make_node(0);
  Node b = make_node(1);
  ASSERT_TRUE(run(a, make_check(bank, alice.id(), 1'000, at(1)), at(1)));
  b.advance_to(a.clock());
  EXPECT_EQ(sync_round(a, b).transferred, 1u);
  EXPECT_EQ(b.ledger().balance(alice.id(), kCurrencyEur), 1'000);
  EXPECT_EQ(a.advert().accounts, b.advert().accounts);
  EXPECT_EQ(sync_round(a, b).transferred, 0u);
}

TEST_F(NodeTest, SyncReplicatesKeysAndCertificates) {
  Node a = make_node(0);
  Node b(1, world.node_config());
  b.advance_to(at(0));
  ASSERT_TRUE(run(a, make_check(bank, alice.id(), 1'000, at(1)), at(1)));
  b.advance_to(a.clock());
  sync_round(a, b);
  EXPECT_EQ(b.ledger().accounts().size(), 4u);
  EXPECT_EQ(b.ledger().certificates().size(), 1u);
  EXPECT_EQ(b.ledger().kind(bank.id(), at(2)), AccountKind::ibank);
  EXPECT_EQ(b.advert().registry, a.advert().registry);
  EXPECT_FALSE(b.is_blacklisted(0));
}

TEST_F(NodeTest, MergedTransactionLeavesQuarantine) {
  Node a = make_node(0);
  Node b = make_node(1);
  const Transaction tx = make_check(bank, alice.id(), 1'000, at(5));
  ASSERT_TRUE(run(a, tx, at(5)));
  ASSERT_TRUE(b.submit(tx, at(5)).queued());
  ASSERT_EQ(b.quarantine().size(), 1u);
  sync_round(a, b);
  EXPECT_TRUE(b.quarantine().empty());
  EXPECT_EQ(b.ledger().balance(alice.id(), kCurrencyEur), 1'000);
}

TEST_F(NodeTest, PartitionDoubleSpendBlocksSenderWithoutBlacklisting) {
  Node a = make_node(0);
  Node b = make_node(1);
  const Transaction fund = make_check(bank, alice.id(), 1'000, at(1));
  ASSERT_TRUE(run(a, fund, at(1)));
  b.advance_to(a.clock());
  sync_round(a, b);

  ASSERT_TRUE(run(a, make_check(alice, bob.id(), 800, at(10)), at(10)));
  ASSERT_TRUE(run(b, make_check(alice, carol.id(), 700, at(10)), at(10)));
  EXPECT_FALSE(a.ledger().is_blocked(alice.id()));
  EXPECT_FALSE(b.ledger().is_blocked(alice.id()));

  const SyncResult r = sync_round(a, b);
  EXPECT_EQ(r.transferred, 2u);
  for (const Node* n : {&a, &b}) {
    EXPECT_EQ(n->ledger().balance(alice.id(), kCurrencyEur), -500);
    EXPECT_TRUE(n->ledger().is_blocked(alice.id()));
    EXPECT_EQ(n->ledger().total(kCurrencyEur), 0);
    EXPECT_TRUE(n->blacklist().empty());
    EXPECT_EQ(n->ledger().balance(bob.id(), kCurrencyEur), 800);
    EXPECT_EQ(n->ledger().balance(carol.id(), kCurrencyEur), 700);
  }
  EXPECT_EQ(a.advert().accounts, b.advert().accounts);

  EXPECT_EQ(run(a, make_check(alice, bob.id(), 1, at(30)), at(30)).rejected_by, Rule::balance);
  ASSERT_TRUE(run(a, make_check(bob, alice.id(), 500, at(31)), at(31)));
  EXPECT_FALSE(a.ledger().is_blocked(alice.id()));
  EXPECT_EQ(a.ledger().balance(alice.id(), kCurrencyEur), 0);
}

TEST_F(NodeTest, InvalidPeerIsBlacklistedPermanently) {
  Node honest = make_node(0);
  DiffPayload payload;
  payload.from = 7;
  Transaction forged = make_check(alice, bob.id(), 10, at(1));
  forged.amount.cents = 1'000'000;
  payload.transactions.push_back(encode_transaction(forged));
  honest.advance_to(at(2));
  const AbsorbReport report = honest.absorb(payload);
  EXPECT_TRUE(report.blacklisted_sender);
  EXPECT_TRUE(honest.is_blacklisted(7));
  EXPECT_EQ(honest.ledger().transactions().size(), 0u);

  Node liar = make_node(7);
  EXPECT_FALSE(sync_round(honest, liar).performed);
  EXPECT_FALSE(sync_round(liar, honest).performed);
}

TEST_F(NodeTest, DetectInvalidPeerDistinguishesBalanceConflicts) {
  Node node = make_node(0);
  node.advance_to(at(5));
  EXPECT_FALSE(detect_invalid_peer(node, 3, make_check(alice, bob.id(), 1'000'000, at(1))));
  EXPECT_FALSE(node.is_blacklisted(3));
  EXPECT_TRUE(detect_invalid_peer(node, 3, make_check(alice, alice.id(), 1, at(1))));
  EXPECT_TRUE(node.is_blacklisted(3));
  EXPECT_TRUE(detect_invalid_peer(node, 4, make_check(alice, bob.id(), 0, at(1))));
  EXPECT_TRUE(detect_invalid_peer(node, 5, make_check(alice, bob.id(), 1, at(6))));
}

TEST_F(NodeTest, MalformedPayloadBytesBlacklist) {
  Node node = make_node(0);
  DiffPayload payload;
  payload.from = 9;
  payload.transactions.push_back(Bytes(157, 0));
  node.absorb(payload);
  EXPECT_TRUE(node.is_blacklisted(9));
}

}  // namespace
}  // namespace moi
