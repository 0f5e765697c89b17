/*
 * cli.cpp
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

#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "moi/base85.hpp"
#include "moi/crypto.hpp"
#include "moi/date.hpp"
#include "moi/ledger.hpp"
#include "moi/node.hpp"
#include "moi/sim.hpp"
#include "moi/wallet.hpp"
#include "moi/wire.hpp"

namespace moi::cli {

namespace {

namespace fs = std::filesystem;

/// Bad user input that is not a protocol rejection.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string wallet;
  std::string store;
  std::string passphrase;
  std::string now;
  std::string master_key;
  bool test_mode = false;
  std::uint32_t quarantine = kDefaultQuarantineMinutes;
  std::uint32_t kdf_iterations = kDefaultKdfIterations;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

fs::path default_wallet() {
  if (const char* dir = std::getenv("MOI_WALLET_DIR"); dir && *dir) return fs::path(dir) / "wallet.json";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".moi" / "wallet.json";
  return "wallet.json";
}

class Context {
 public:
  Context(Globals g, std::ostream& out, std::ostream& err) : g_(std::move(g)), out(out), err(err) {}

  const Globals& globals() const { return g_; }

  fs::path wallet_path() const { return g_.wallet.empty() ? default_wallet() : fs::path(g_.wallet); }
  fs::path store_path() const {
    return g_.store.empty() ? fs::path(env_or("MOI_STORE_DIR", "moi-store")) : fs::path(g_.store);
  }

  MoiDate now() const {
    if (g_.now.empty()) return current_date();
    auto parsed = parse_iso_minute(g_.now);
    if (!parsed) throw UsageError("bad --now value '" + g_.now + "'");
    return *parsed;
  }

  const std::string& passphrase() const {
    if (g_.passphrase.empty()) {
      throw UsageError("a passphrase is required (--passphrase or MOI_PASSPHRASE)");
    }
    return g_.passphrase;
  }

  NodeConfig node_config(NodeId id) const {
    NodeConfig config;
    config.ledger.test_mode = g_.test_mode;
    if (!g_.master_key.empty()) config.ledger.authority_key = public_key_from_text(g_.master_key);
    config.quarantine_minutes = g_.quarantine;
    fs::create_directories(store_path());
    config.log_path = store_path() / ("node-" + std::to_string(id) + ".log");
    return config;
  }

  Node open_node(NodeId id) const {
    Node node(id, node_config(id));
    if (node.load_report().truncated) {
      err << "warning: node " << id << " log " << node.load_report().error
          << "; recovered " << node.load_report().valid_bytes << " bytes\n";
    }
    node.advance_to(now());
    return node;
  }

  int reject(std::string_view reason) {
    err << "rejected: " << reason << '\n';
    return kExitRejected;
  }

  int reject(Rule rule) {
    return reject(std::string(rule_tag(rule)) + " " + std::string(rule_name(rule)));
  }

 private:
  Globals g_;

 public:
  std::ostream& out;
  std::ostream& err;
};

std::string default_version_text(const Globals& g) { return g.test_mode ? "1" : "4"; }

ProtocolVersion parse_version(const std::string& text) {
  unsigned v = 0;
  try {
    v = static_cast<unsigned>(std::stoul(text, nullptr, 0));
  } catch (const std::exception&) {
    throw UsageError("bad protocol version '" + text + "'");
  }
  if (v > ProtocolVersion::kMax) throw UsageError("protocol version must fit in 4 bits");
  return ProtocolVersion{static_cast<std::uint8_t>(v)};
}

CurrencyCode parse_currency_arg(const std::string& text) {
  auto c = parse_currency(text);
  if (!c) throw UsageError("unknown currency '" + text + "'");
  return *c;
}

MoiDate parse_date_arg(const std::string& text, const Context& ctx) {
  if (text.empty()) return ctx.now();
  auto d = parse_iso_minute(text);
  if (!d) throw UsageError("bad date '" + text + "' (expected YYYY-MM-DDTHH:MM)");
  return *d;
}

Cents parse_amount_arg(const std::string& text) {
  auto cents = parse_cents(text);
  if (!cents || *cents < 0) throw UsageError("bad amount '" + text + "' (expected units with two decimals)");
  if (*cents > static_cast<Cents>(Amount::kMax)) {
    throw UsageError("amount exceeds the 24-bit maximum of " + format_cents(Amount::kMax));
  }
  return *cents;
}

AccountId parse_account_arg(const std::string& text, const Wallet* wallet) {
  if (wallet) {
    if (const auto* id = wallet->find(text)) return id->id();
  }
  try {
    return account_id_from_text(text);
  } catch (const CodecError& e) {
    throw UsageError("bad account id '" + text + "': " + e.what());
  }
}

void print_identity(std::ostream& out, const WalletIdentity& id) {
  out << "label: " << id.label << '\n'
      << "id: " << account_id_to_text(id.id()) << '\n'
      << "id-hex: " << id.id().hex() << '\n'
      << "public-key: " << public_key_to_text(id.public_key) << '\n';
}

void print_transaction(std::ostream& out, const Transaction& tx) {
  out << "version: 0x" << std::hex << int{tx.version.value} << std::dec
      << (tx.version.is_test() ? " (test)" : tx.version.is_trading() ? " (trading)" : " (reserved)") << '\n'
      << "amount: " << format_cents(tx.amount.cents) << '\n'
      << "currency: " << tx.currency.name() << '\n'
      << "date: " << format_iso_minute(tx.date) << '\n'
      << "sender: " << account_id_to_text(tx.sender) << " (" << tx.sender.hex() << ")\n"
      << "recipient: " << account_id_to_text(tx.recipient) << " (" << tx.recipient.hex() << ")\n";
  if (!tx.reference.empty()) out << "reference: " << reference_text(tx) << '\n';
  out << "bytes: " << transaction_size(tx.ref_words()) << '\n';
}

struct CheckArgs {
  std::string from;
  std::string to;
  std::string amount;
  std::string currency = "EUR";
  std::string date;
  std::string reference;
  std::string version;
  std::string label;
};

/// Builds and signs a check from wallet identity `from`. Returns nullopt and
/// an exit code through `code` when creation is refused.
std::optional<Transaction> make_check(Context& ctx, const Wallet& wallet, const CheckArgs& args, int& code) {
  const WalletIdentity* from = wallet.resolve(args.from);
  if (!from) throw UsageError("no identity '" + args.from + "' in wallet");
  Transaction tx;
  tx.version = parse_version(args.version.empty() ? default_version_text(ctx.globals()) : args.version);
  const Cents cents = parse_amount_arg(args.amount);
  if (cents == 0) {
    code = ctx.reject(Rule::amount);
    return std::nullopt;
  }
  tx.amount = Amount{static_cast<std::uint32_t>(cents)};
  tx.currency = parse_currency_arg(args.currency);
  tx.date = parse_date_arg(args.date, ctx);
  tx.sender = from->id();
  tx.recipient = parse_account_arg(args.to, &wallet);
  if (tx.sender == tx.recipient) {
    code = ctx.reject(Rule::self_send);
    return std::nullopt;
  }
  try {
    tx.reference = make_reference(args.reference);
  } catch (const CodecError& e) {
    throw UsageError(e.what());
  }
  sign_transaction(tx, wallet.unlock(from->label, ctx.passphrase()));
  return tx;
}

int cmd_keygen(Context& ctx, const std::string& label, const std::string& vanity,
               std::size_t max_iterations, std::optional<std::uint64_t> seed) {
  std::unique_ptr<RandomSource> rng;
  if (seed) {
    rng = std::make_unique<SeededRandom>(*seed);
  } else {
    rng = std::make_unique<SystemRandom>();
  }

  IdPredicate predicate = [](std::string_view) { return true; };
  if (vanity == "alnum") {
    predicate = is_alphanumeric_id;
  } else if (vanity.rfind("prefix:", 0) == 0) {
    const std::string prefix = vanity.substr(7);
    predicate = [prefix](std::string_view id) { return id.substr(0, prefix.size()) == prefix; };
  } else if (!vanity.empty()) {
    throw UsageError("unknown vanity predicate '" + vanity + "' (alnum or prefix:<text>)");
  }

  const auto& passphrase = ctx.passphrase();
  std::size_t used = 0;
  auto pair = vanity_search(predicate, vanity.empty() ? 1 : max_iterations, *rng, &used);
  if (!pair) return ctx.reject("vanity-exhausted after " + std::to_string(used) + " keys");

  WalletLock lock(ctx.wallet_path());
  Wallet wallet = Wallet::load(ctx.wallet_path());
  if (wallet.resolve(account_id_to_text(pair->id()))) {
    // Two identities with the same 8-byte id would be indistinguishable on the network.
    return ctx.reject("id-collision");
  }
  const auto& id = wallet.add_identity(label, *pair, passphrase, ctx.globals().kdf_iterations);
  wallet.save(ctx.wallet_path());
  print_identity(ctx.out, id);
  if (!vanity.empty()) ctx.out << "iterations: " << used << '\n';
  return kExitOk;
}

int cmd_id(Context& ctx, const std::string& label) {
  WalletLock lock(ctx.wallet_path());
  const Wallet wallet = Wallet::load(ctx.wallet_path());
  if (!label.empty()) {
    const auto* id = wallet.resolve(label);
    if (!id) throw UsageError("no identity '" + label + "' in wallet");
    print_identity(ctx.out, *id);
    return kExitOk;
  }
  for (const auto& id : wallet.identities()) {
    ctx.out << id.label << ' ' << account_id_to_text(id.id()) << ' ' << id.id().hex() << '\n';
  }
  return kExitOk;
}

int cmd_check_create(Context& ctx, const CheckArgs& args) {
  WalletLock lock(ctx.wallet_path());
  const Wallet wallet = Wallet::load(ctx.wallet_path());
  int code = kExitOk;
  auto tx = make_check(ctx, wallet, args, code);
  if (!tx) return code;
  ctx.out << transaction_to_text(*tx) << '\n';
  return kExitOk;
}

int cmd_check_verify(Context& ctx, const std::string& text, const std::string& pubkey,
                     std::optional<NodeId> node_id) {
  const Transaction tx = transaction_from_text(text);
  print_transaction(ctx.out, tx);

  if (node_id) {
    Node node = ctx.open_node(*node_id);
    const Verdict verdict = node.ledger().validate(tx, node.clock());
    if (!verdict) return ctx.reject(*verdict.rejected_by);
    ctx.out << "verdict: acceptable\n";
    return kExitOk;
  }

  std::optional<PublicKey> key;
  if (!pubkey.empty()) {
    key = public_key_from_text(pubkey);
  } else {
    const Wallet wallet = Wallet::load(ctx.wallet_path());
    for (const auto& id : wallet.identities()) {
      if (id.id() == tx.sender) key = id.public_key;
    }
  }
  if (!key) {
    ctx.out << "signature: not checked (sender key unknown)\n";
    return kExitOk;
  }
  if (derive_account_id(*key) != tx.sender || !verify_transaction(tx, *key)) {
    return ctx.reject(Rule::signature);
  }
  ctx.out << "signature: valid\n";
  return kExitOk;
}

int cmd_recover_prepare(Context& ctx, CheckArgs args) {
  WalletLock lock(ctx.wallet_path());
  Wallet wallet = Wallet::load(ctx.wallet_path());
  int code = kExitOk;
  auto tx = make_check(ctx, wallet, args, code);
  if (!tx) return code;
  const std::string label = args.label.empty()
                                ? "recovery-" + std::to_string(wallet.recovery_checks().size() + 1)
                                : args.label;
  wallet.add_recovery_check(label, *tx);
  wallet.save(ctx.wallet_path());
  ctx.out << transaction_to_text(*tx) << '\n';
  ctx.err << "stored unpublished recovery check '" << label << "'\n";
  return kExitOk;
}

int cmd_recover_list(Context& ctx) {
  WalletLock lock(ctx.wallet_path());
  const Wallet wallet = Wallet::load(ctx.wallet_path());
  for (const auto& check : wallet.recovery_checks()) {
    ctx.out << check.label << ' ' << check.text << '\n';
  }
  return kExitOk;
}

int cmd_publish(Context& ctx, NodeId node_id, const std::string& tx_text, const std::string& key_arg,
                const std::string& cert_text) {
  const int given = !tx_text.empty() + !key_arg.empty() + !cert_text.empty();
  if (given != 1) throw UsageError("publish takes exactly one of <check>, --key or --cert");
  Node node = ctx.open_node(node_id);

  if (!key_arg.empty()) {
    PublicKey key;
    const Wallet wallet = Wallet::load(ctx.wallet_path());
    if (const auto* id = wallet.resolve(key_arg)) {
      key = id->public_key;
    } else {
      key = public_key_from_text(key_arg);
    }
    try {
      const AccountId id = node.publish_key(key);
      ctx.out << "published key " << account_id_to_text(id) << " on node " << node_id << '\n';
    } catch (const LedgerError& e) {
      return ctx.reject(e.code() == LedgerErrc::id_collision ? "id-collision" : "invalid-public-key");
    }
    return kExitOk;
  }

  if (!cert_text.empty()) {
    const Certificate cert = certificate_from_text(cert_text);
    const auto verdict = node.publish_certificate(cert);
    if (!verdict) return ctx.reject("certificate " + std::string(to_string(*verdict.rejected_by)));
    ctx.out << "published certificate for " << account_id_to_text(cert.subject) << " ("
            << to_string(node.ledger().kind(cert.subject, node.clock())) << ")\n";
    return kExitOk;
  }

  const Transaction tx = transaction_from_text(tx_text);
  const SubmitResult submitted = node.submit(tx, node.clock());
  if (!submitted.queued()) return ctx.reject(*submitted.rejected_by);
  ctx.out << "queued " << submitted.digest.hex() << " release=" << format_iso_minute(submitted.release) << '\n';
  for (const auto& ev : node.advance_to(submitted.release)) {
    if (ev.digest != submitted.digest) continue;
    if (!ev.verdict) return ctx.reject(*ev.verdict.rejected_by);
    ctx.out << "executed " << ev.digest.hex() << '\n';
  }
  return kExitOk;
}

int cmd_balance(Context& ctx, NodeId node_id, const std::string& account, const std::string& currency) {
  const Wallet wallet = Wallet::load(ctx.wallet_path());
  const AccountId id = parse_account_arg(account, &wallet);
  Node node = ctx.open_node(node_id);
  const auto& ledger = node.ledger();
  if (!currency.empty()) {
    ctx.out << format_cents(ledger.balance(id, parse_currency_arg(currency))) << '\n';
  } else {
    const auto held = ledger.balances(id);
    if (held.empty()) ctx.out << "0.00\n";
    for (const auto& [code, cents] : held) ctx.out << code.name() << ' ' << format_cents(cents) << '\n';
  }
  if (ledger.is_blocked(id)) ctx.out << "blocked\n";
  return kExitOk;
}

int cmd_sms_split(Context& ctx, const std::string& tx_text, const std::string& ref_hex) {
  const Transaction tx = transaction_from_text(tx_text);
  ByteArray<kSmsRefIdSize> ref{};
  if (ref_hex.empty()) {
    SystemRandom().fill(ref);
  } else {
    auto raw = from_hex(ref_hex);
    if (!raw || raw->size() != kSmsRefIdSize) throw UsageError("--ref-id must be 16 hex digits");
    std::copy(raw->begin(), raw->end(), ref.begin());
  }
  const SmsPair pair = sms_split(tx, ref);
  ctx.out << "part1 " << pair.part1.size() << ' ' << base85_encode(pair.part1) << '\n'
          << "part2 " << pair.part2.size() << ' ' << base85_encode(pair.part2) << '\n';
  return kExitOk;
}

int cmd_sms_join(Context& ctx, const std::string& part1, const std::string& part2) {
  const Transaction tx = sms_join(base85_decode(part1), base85_decode(part2));
  ctx.out << transaction_to_text(tx) << '\n';
  return kExitOk;
}

int cmd_sim_run(Context& ctx, const std::string& path, std::uint64_t seed, bool quiet) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read scenario " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const sim::Scenario scenario = sim::parse_scenario(text);
  const sim::SimulationResult result = sim::run_simulation(scenario, seed);
  if (!quiet) {
    for (const auto& line : result.trace) ctx.out << line << '\n';
  }
  for (const auto& node : result.nodes) {
    const auto& ledger = node.ledger();
    ctx.out << "node " << node.id() << ": accounts=" << ledger.accounts().size()
            << " transactions=" << ledger.transactions().size()
            << " blocked=" << ledger.blocked().size()
            << " blacklist=" << node.blacklist().size() << '\n';
  }
  for (const auto& failure : result.failed_expectations) ctx.err << "expectation failed: " << failure << '\n';
  return result.ok() ? kExitOk : ctx.reject("expectations-failed");
}

int cmd_cert_issue(Context& ctx, const std::string& from, const std::string& subject,
                   std::uint32_t debt_kilo, const std::string& deadline, const std::string& currency,
                   const std::string& version) {
  WalletLock lock(ctx.wallet_path());
  const Wallet wallet = Wallet::load(ctx.wallet_path());
  const WalletIdentity* authority = wallet.resolve(from);
  if (!authority) throw UsageError("no identity '" + from + "' in wallet");
  Certificate cert;
  cert.version = parse_version(version.empty() ? default_version_text(ctx.globals()) : version);
  cert.currency = parse_currency_arg(currency);
  if (cert.currency.value > Certificate::kMaxCurrency) {
    throw UsageError("certificate currency must be 0x0-0xF");
  }
  if (debt_kilo > Certificate::kMaxDebtKilo) throw UsageError("debt exceeds 24 bits");
  cert.debt_kilo = debt_kilo;
  cert.deadline = parse_date_arg(deadline, ctx);
  cert.subject = parse_account_arg(subject, &wallet);
  sign_certificate(cert, wallet.unlock(authority->label, ctx.passphrase()));
  ctx.out << certificate_to_text(cert) << '\n';
  return kExitOk;
}

int cmd_sync(Context& ctx, NodeId a, NodeId b) {
  if (a == b) throw UsageError("a node cannot sync with itself");
  Node na = ctx.open_node(a);
  Node nb = ctx.open_node(b);
  const SyncResult result = sync_round(na, nb);
  ctx.out << "transferred " << result.transferred << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"moi: wallet and node tool for the Money Over IP payment protocol"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Globals g;
  g.passphrase = env_or("MOI_PASSPHRASE", "");
  g.master_key = env_or("MOI_MASTER_KEY", "");
  app.add_option("--wallet", g.wallet, "Wallet file (default $MOI_WALLET_DIR/wallet.json)");
  app.add_option("--store", g.store, "Node storage directory (default $MOI_STORE_DIR or ./moi-store)");
  app.add_option("--passphrase", g.passphrase, "Wallet passphrase (default $MOI_PASSPHRASE)");
  app.add_option("--now", g.now, "Override the current minute (YYYY-MM-DDTHH:MM)");
  app.add_flag("--test-mode", g.test_mode, "Accept test protocol versions 0x0-0x3");
  app.add_option("--master-key", g.master_key, "Base85 master authority key replacing the embedded one");
  app.add_option("--quarantine", g.quarantine, "Tempo quarantine window in minutes");
  app.add_option("--kdf-iterations", g.kdf_iterations, "PBKDF2 iterations for new identities")
      ->check(CLI::Range(1000u, 10'000'000u));

  std::function<int(Context&)> action;

  auto* keygen = app.add_subcommand("keygen", "Generate an identity and store it in the wallet");
  std::string kg_label, kg_vanity;
  std::size_t kg_max = 100'000;
  std::optional<std::uint64_t> kg_seed;
  keygen->add_option("label", kg_label, "Identity label")->required();
  keygen->add_option("--vanity", kg_vanity, "Id predicate: alnum or prefix:<text>");
  keygen->add_option("--max-iterations", kg_max, "Vanity search budget")->check(CLI::PositiveNumber);
  keygen->add_option("--seed", kg_seed, "Deterministic key stream (testing only)");
  keygen->callback([&] { action = [&](Context& c) { return cmd_keygen(c, kg_label, kg_vanity, kg_max, kg_seed); }; });

  auto* id_cmd = app.add_subcommand("id", "Show wallet identities");
  std::string id_label;
  id_cmd->add_option("label", id_label, "Identity label or id");
  id_cmd->callback([&] { action = [&](Context& c) { return cmd_id(c, id_label); }; });

  auto add_check_options = [](CLI::App* cmd, CheckArgs& a) {
    cmd->add_option("--from", a.from, "Sending identity (label or id)")->required();
    cmd->add_option("--to", a.to, "Recipient id (base85, hex or wallet label)")->required();
    cmd->add_option("--amount", a.amount, "Amount in units, e.g. 12.50")->required();
    cmd->add_option("--currency", a.currency, "Currency code or name")->capture_default_str();
    cmd->add_option("--date", a.date, "Check date (default: now)");
    cmd->add_option("--version", a.version, "Protocol version nibble");
  };

  auto* check = app.add_subcommand("check", "Create or verify digital checks");
  check->require_subcommand(1);
  auto* check_create = check->add_subcommand("create", "Sign a check and print it as base85");
  CheckArgs create_args;
  add_check_options(check_create, create_args);
  check_create->add_option("--reference", create_args.reference, "Free text, at most 60 bytes");
  check_create->callback([&] { action = [&](Context& c) { return cmd_check_create(c, create_args); }; });

  auto* check_verify = check->add_subcommand("verify", "Decode a check and verify it");
  std::string verify_text, verify_key;
  std::optional<NodeId> verify_node;
  check_verify->add_option("check", verify_text, "Base85 check")->required();
  check_verify->add_option("--pubkey", verify_key, "Sender public key (base85)");
  check_verify->add_option("--node", verify_node, "Validate against this node's ledger");
  check_verify->callback([&] {
    action = [&](Context& c) { return cmd_check_verify(c, verify_text, verify_key, verify_node); };
  });

  auto* recover = app.add_subcommand("recover", "Recovery checks for a lost device");
  recover->require_subcommand(1);
  auto* recover_prepare = recover->add_subcommand("prepare", "Sign and store an unpublished check to a trustee");
  CheckArgs recover_args;
  add_check_options(recover_prepare, recover_args);
  recover_prepare->add_option("--label", recover_args.label, "Name for the stored check");
  recover_prepare->callback([&] { action = [&](Context& c) { return cmd_recover_prepare(c, recover_args); }; });
  auto* recover_list = recover->add_subcommand("list", "Print stored recovery checks");
  recover_list->callback([&] { action = [&](Context& c) { return cmd_recover_list(c); }; });

  auto* publish = app.add_subcommand("publish", "Publish a check, key or certificate to a node");
  NodeId publish_node = 0;
  std::string publish_tx, publish_key, publish_cert;
  publish->add_option("--node", publish_node, "Target node")->required();
  publish->add_option("check", publish_tx, "Base85 check");
  publish->add_option("--key", publish_key, "Wallet label or base85 public key");
  publish->add_option("--cert", publish_cert, "Base85 certificate");
  publish->callback([&] {
    action = [&](Context& c) { return cmd_publish(c, publish_node, publish_tx, publish_key, publish_cert); };
  });

  auto* balance = app.add_subcommand("balance", "Print an account balance as seen by a node");
  NodeId balance_node = 0;
  std::string balance_id, balance_currency;
  balance->add_option("--node", balance_node, "Target node")->required();
  balance->add_option("account", balance_id, "Account id or wallet label")->required();
  balance->add_option("--currency", balance_currency, "Print only this currency");
  balance->callback([&] {
    action = [&](Context& c) { return cmd_balance(c, balance_node, balance_id, balance_currency); };
  });

  auto* sms = app.add_subcommand("sms", "Two-message framing of a check");
  sms->require_subcommand(1);
  auto* sms_split_cmd = sms->add_subcommand("split", "Split a check into message and signature parts");
  std::string split_tx, split_ref;
  sms_split_cmd->add_option("check", split_tx, "Base85 check")->required();
  sms_split_cmd->add_option("--ref-id", split_ref, "8-byte reference id as hex (default random)");
  sms_split_cmd->callback([&] { action = [&](Context& c) { return cmd_sms_split(c, split_tx, split_ref); }; });
  auto* sms_join_cmd = sms->add_subcommand("join", "Reassemble a check from its two parts");
  std::string join_p1, join_p2;
  sms_join_cmd->add_option("part1", join_p1, "Base85 message part")->required();
  sms_join_cmd->add_option("part2", join_p2, "Base85 signature part")->required();
  sms_join_cmd->callback([&] { action = [&](Context& c) { return cmd_sms_join(c, join_p1, join_p2); }; });

  auto* sim_cmd = app.add_subcommand("sim", "Multi-node simulation");
  sim_cmd->require_subcommand(1);
  auto* sim_run = sim_cmd->add_subcommand("run", "Run a scenario script");
  std::string sim_path;
  std::uint64_t sim_seed = 1;
  bool sim_quiet = false;
  sim_run->add_option("scenario", sim_path, "Scenario file")->required();
  sim_run->add_option("--seed", sim_seed, "Simulation seed")->capture_default_str();
  sim_run->add_flag("--quiet", sim_quiet, "Only print the final summary");
  sim_run->callback([&] { action = [&](Context& c) { return cmd_sim_run(c, sim_path, sim_seed, sim_quiet); }; });

  auto* cert = app.add_subcommand("cert", "Certificates");
  cert->require_subcommand(1);
  auto* cert_issue = cert->add_subcommand("issue", "Sign a certificate with a wallet identity acting as test authority");
  std::string ci_from, ci_subject, ci_deadline, ci_currency = "EUR", ci_version;
  std::uint32_t ci_debt = 0;
  cert_issue->add_option("--from", ci_from, "Authority identity")->required();
  cert_issue->add_option("--subject", ci_subject, "Certified account")->required();
  cert_issue->add_option("--debt-kilo", ci_debt, "Debt ceiling in thousands of units (0 = registrar)")->required();
  cert_issue->add_option("--deadline", ci_deadline, "Validity deadline (YYYY-MM-DDTHH:MM)")->required();
  cert_issue->add_option("--currency", ci_currency, "Currency 0x0-0xF")->capture_default_str();
  cert_issue->add_option("--version", ci_version, "Protocol version nibble");
  cert_issue->callback([&] {
    action = [&](Context& c) {
      return cmd_cert_issue(c, ci_from, ci_subject, ci_debt, ci_deadline, ci_currency, ci_version);
    };
  });

  auto* sync_cmd = app.add_subcommand("sync", "Run one anti-entropy round between two stored nodes");
  NodeId sync_a = 0, sync_b = 0;
  sync_cmd->add_option("a", sync_a, "First node")->required();
  sync_cmd->add_option("b", sync_b, "Second node")->required();
  sync_cmd->callback([&] { action = [&](Context& c) { return cmd_sync(c, sync_a, sync_b); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx(g, out, err);
  try {
    return action ? action(ctx) : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const CodecError& e) {
    err << "error: cannot parse input (" << to_string(e.code()) << "): " << e.what() << '\n';
  } catch (const WalletError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const sim::ScenarioError& e) {
    err << "error: scenario " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("moi");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace moi::cli
