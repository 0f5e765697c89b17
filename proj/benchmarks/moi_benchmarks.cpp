/*
 * moi_benchmarks.cpp
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

#include <benchmark/benchmark.h>

#include <random>

#include "moi/base85.hpp"
#include "moi/sim.hpp"
#include "test_support.hpp"

namespace {

using namespace moi;
using testing::at;
using testing::keypair;
using testing::make_check;

void BM_EncodeTransaction(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Transaction tx = testing::random_transaction(rng);
  for (auto _ : state) benchmark::DoNotOptimize(encode_transaction(tx));
}
BENCHMARK(BM_EncodeTransaction);

void BM_DecodeTransaction(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Bytes encoded = encode_transaction(testing::random_transaction(rng));
  for (auto _ : state) benchmark::DoNotOptimize(decode_transaction(encoded));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(encoded.size()));
}
BENCHMARK(BM_DecodeTransaction);

void BM_Base85Encode(benchmark::State& state) {
  const Bytes data(static_cast<std::size_t>(state.range(0)), 0x5A);
  for (auto _ : state) benchmark::DoNotOptimize(base85_encode(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Base85Encode)->Arg(156)->Arg(216)->Arg(4096);

void BM_Base85Decode(benchmark::State& state) {
  const std::string text = base85_encode(Bytes(static_cast<std::size_t>(state.range(0)), 0x5A));
  for (auto _ : state) benchmark::DoNotOptimize(base85_decode(text));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Base85Decode)->Arg(156)->Arg(4096);

void BM_Sign(benchmark::State& state) {
  const KeyPair pair = keypair(1);
  Bytes payload(24, 0x11);
  std::uint32_t n = 0;
  for (auto _ : state) {
    payload[0] = static_cast<std::uint8_t>(n++);
    benchmark::DoNotOptimize(sign(pair.secret, payload));
  }
}
BENCHMARK(BM_Sign)->Unit(benchmark::kMicrosecond);

void BM_Verify(benchmark::State& state) {
  const KeyPair pair = keypair(1);
  const Bytes payload(24, 0x11);
  const Signature sig = sign(pair.secret, payload);
  for (auto _ : state) benchmark::DoNotOptimize(verify(pair.public_key, payload, sig));
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMicrosecond);

void BM_KeyGeneration(benchmark::State& state) {
  SeededRandom rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(generate_keypair(rng));
}
BENCHMARK(BM_KeyGeneration)->Unit(benchmark::kMicrosecond);

/// Balance bookkeeping alone: checks are pre-signed and merged.
void BM_LedgerMerge(benchmark::State& state) {
  testing::World world;
  const KeyPair bank = keypair(1);
  std::vector<Transaction> txs;
  for (std::uint32_t m = 1; m <= 2'000; ++m) {
    txs.push_back(make_check(bank, AccountId::from_u64(m % 64 + 1), 100, at(m)));
  }
  for (auto _ : state) {
    Ledger ledger(world.ledger_config());
    for (const auto& tx : txs) ledger.merge(tx);
    benchmark::DoNotOptimize(ledger.total(kCurrencyEur));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(txs.size()));
}
BENCHMARK(BM_LedgerMerge)->Unit(benchmark::kMillisecond);

void BM_LedgerValidateApply(benchmark::State& state) {
  testing::World world;
  const KeyPair bank = keypair(1);
  const KeyPair user = keypair(2);
  Ledger ledger(world.ledger_config());
  ledger.register_public_key(bank.public_key, at(0));
  ledger.register_public_key(user.public_key, at(0));
  ledger.register_certificate(world.certify(bank.id(), Certificate::kMaxDebtKilo), at(0));
  std::vector<Transaction> txs;
  for (std::uint32_t m = 1; m <= 256; ++m) txs.push_back(make_check(bank, user.id(), 1, at(m)));
  std::size_t i = 0;
  for (auto _ : state) {
    if (i == txs.size()) {
      state.PauseTiming();
      ledger = Ledger(world.ledger_config());
      ledger.register_public_key(bank.public_key, at(0));
      ledger.register_public_key(user.public_key, at(0));
      ledger.register_certificate(world.certify(bank.id(), Certificate::kMaxDebtKilo), at(0));
      i = 0;
      state.ResumeTiming();
    }
    const auto& tx = txs[i++];
    if (ledger.validate(tx, at(1'000))) ledger.apply(tx);
  }
}
BENCHMARK(BM_LedgerValidateApply)->Unit(benchmark::kMicrosecond);

void BM_AccountChecksum(benchmark::State& state) {
  testing::World world;
  const KeyPair bank = keypair(1);
  Ledger ledger(world.ledger_config());
  const AccountId user = AccountId::from_u64(7);
  for (std::uint32_t m = 1; m <= static_cast<std::uint32_t>(state.range(0)); ++m) {
    ledger.merge(make_check(bank, user, 1, at(m)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(ledger.account_checksum(user));
}
BENCHMARK(BM_AccountChecksum)->Arg(10)->Arg(500);

/// Two nodes, one holding `range` fresh checks the other lacks.
void BM_SyncRound(benchmark::State& state) {
  testing::World world;
  const KeyPair bank = keypair(1);
  std::vector<KeyPair> users;
  for (int i = 0; i < 16; ++i) users.push_back(keypair(10 + i));
  std::vector<Transaction> txs;
  for (std::uint32_t m = 1; m <= static_cast<std::uint32_t>(state.range(0)); ++m) {
    txs.push_back(make_check(bank, users[m % users.size()].id(), 10, at(m)));
  }
  for (auto _ : state) {
    state.PauseTiming();
    Node a(0, world.node_config());
    Node b(1, world.node_config());
    for (Node* n : {&a, &b}) {
      n->publish_key(bank.public_key);
      for (const auto& u : users) n->publish_key(u.public_key);
      n->publish_certificate(world.certify(bank.id(), 1'000));
    }
    DiffPayload seed;
    seed.from = 9;
    for (const auto& tx : txs) seed.transactions.push_back(encode_transaction(tx));
    a.advance_to(at(100'000));
    b.advance_to(at(100'000));
    a.absorb(seed);
    state.ResumeTiming();
    benchmark::DoNotOptimize(sync_round(a, b));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SyncRound)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
