/*
 * Copyright 2026 The forkbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "forkbench/assembler.hpp"
#include "forkbench/netsim.hpp"

namespace forkbench {
namespace {

const Bytes kRegistered = assemble("PUSH_INT 1\nHALT");

Transaction pay_tx(uint64_t nonce, const std::string& to, uint64_t amount) {
  Transaction tx;
  tx.body.nonce = nonce;
  tx.body.gas_limit = 1000;
  tx.body.script = assemble("PUSH_BYTES \"" + to + "\"\nPUSH_INT " + std::to_string(amount) + "\nTRANSFER TKN\nHALT");
  tx.witness.verification_script = kRegistered;
  return tx;
}

WorldSpec simple_world() {
  WorldSpec w;
  w.nodes = {{"P", Role::Producer, {}, {}}, {"V1", Role::Validator, {}, {}}, {"V2", Role::Validator, {}, {}}};
  w.genesis = {{"TKN", std::string(kContractAccount), 100}};
  w.verification_script = kRegistered;
  w.blocks = {{pay_tx(1, "A", 5)}, {pay_tx(2, "B", 7)}};
  return w;
}

size_t count(const WorldState& w, std::string_view kind) {
  return std::count_if(w.trace.begin(), w.trace.end(), [&](const Event& e) { return event_kind(e) == kind; });
}

TEST(AdversaryMutate, StripWitness) {
  Block b;
  b.txs = {pay_tx(1, "A", 1), pay_tx(2, "B", 1)};
  const Block m = adversary_mutate(b, {MutationKind::StripWitness, 1});
  EXPECT_EQ(m.header, b.header);
  EXPECT_FALSE(m.txs[0].witness.verification_script.empty());
  EXPECT_TRUE(m.txs[1].witness.verification_script.empty());
  EXPECT_EQ(tx_ids(m.txs), tx_ids(b.txs));
  EXPECT_THROW(adversary_mutate(b, {MutationKind::StripWitness, 2}), BadIndex);
}

TEST(AdversaryMutate, AppendDuplicateAndNone) {
  Block b;
  b.txs = {pay_tx(1, "A", 1)};
  const Block m = adversary_mutate(b, {MutationKind::AppendDuplicateLastTx, 0});
  ASSERT_EQ(m.txs.size(), 2u);
  EXPECT_EQ(m.txs[1], m.txs[0]);
  EXPECT_EQ(adversary_mutate(b, {}), b);
  EXPECT_THROW(adversary_mutate(Block{}, {MutationKind::AppendDuplicateLastTx, 0}), BadIndex);
}

TEST(RunWorld, HonestRunIsClean) {
  const WorldState w = run_world(simple_world(), 1);
  EXPECT_EQ(count(w, "BlockAccepted"), 6u);
  EXPECT_EQ(w.trace.size(), 6u);
  for (const NodeRecord& n : w.nodes) {
    EXPECT_EQ(n.state.height, 2u);
    EXPECT_EQ(n.state.balance("TKN", "A"), 5u);
    EXPECT_EQ(n.state.balance("TKN", "B"), 7u);
    EXPECT_EQ(n.state.digest(), w.nodes[0].state.digest());
  }
}

TEST(RunWorld, ProducerCommitsFirst) {
  const WorldState w = run_world(simple_world(), 3);
  ASSERT_FALSE(w.trace.empty());
  EXPECT_EQ(std::get<BlockAccepted>(w.trace[0]).node, "P");
}

TEST(RunWorld, DeterministicPerSeed) {
  const WorldSpec spec = simple_world();
  const WorldState a = run_world(spec, 42);
  const WorldState b = run_world(spec, 42);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].index(), b.trace[i].index());
  for (size_t i = 0; i < a.nodes.size(); ++i) EXPECT_EQ(a.nodes[i].state.digest(), b.nodes[i].state.digest());
}

TEST(RunWorld, DivergentProfileForksAndDoubleSpends) {
  WorldSpec w = simple_world();
  for (NodeSpec& n : w.nodes) n.cfg.write_set_check = false;
  w.nodes[2].profile.bigdiv_mode = BigDivMode::Floor;
  Transaction tx;
  tx.body.nonce = 9;
  tx.body.gas_limit = 100;
  tx.body.script = assemble(
      "PUSH_INT -7\nPUSH_INT 2\nBIGDIV\nPUSH_INT -3\nEQ\nJZ b\nPUSH_BYTES \"A\"\nPUSH_INT 1\nTRANSFER TKN\nHALT\n"
      "b: PUSH_BYTES \"B\"\nPUSH_INT 1\nTRANSFER TKN\nHALT");
  tx.witness.verification_script = kRegistered;
  w.blocks = {{tx}};
  const WorldState out = run_world(w, 7);
  EXPECT_EQ(count(out, "ForkDetected"), 1u);
  ASSERT_EQ(count(out, "DoubleSpend"), 1u);

  for (NodeSpec& n : w.nodes) n.cfg.write_set_check = true;
  const WorldState mitigated = run_world(w, 7);
  EXPECT_EQ(count(mitigated, "DoubleSpend"), 0u);
  EXPECT_EQ(count(mitigated, "DivergenceRefused"), 1u);
  EXPECT_EQ(count(mitigated, "ForkDetected"), 0u);
  EXPECT_EQ(mitigated.nodes[2].state.height, 0u);
}

TEST(RunWorld, SpecErrors) {
  WorldSpec w = simple_world();
  w.nodes[1].role = Role::Producer;
  EXPECT_THROW(run_world(w, 1), ScenarioError);

  w = simple_world();
  w.nodes.push_back(w.nodes[1]);
  EXPECT_THROW(run_world(w, 1), ScenarioError);

  w = simple_world();
  w.deliveries = {{0, "P", {}}};
  EXPECT_THROW(run_world(w, 1), ScenarioError);

  w = simple_world();
  w.deliveries = {{5, "V1", {}}};
  EXPECT_THROW(run_world(w, 1), ScenarioError);

  w = simple_world();
  w.deliveries = {{0, "V1", {MutationKind::StripWitness, 0}}};
  EXPECT_THROW(run_world(w, 1), ScenarioError);

  w = simple_world();
  w.blocks.push_back({});
  EXPECT_THROW(run_world(w, 1), ScenarioError);

  w = simple_world();
  w.vrf = VrfRounds{0};
  EXPECT_THROW(run_world(w, 1), ScenarioError);
}

TEST(RunWorld, ExplicitDeliveriesOnly) {
  WorldSpec w = simple_world();
  w.deliveries = {{0, "V1", {}}};
  const WorldState out = run_world(w, 1);
  EXPECT_EQ(out.nodes[1].state.height, 1u);
  EXPECT_EQ(out.nodes[2].state.height, 0u);
}

TEST(EffectiveProfile, MixesSeedKeepsEquality) {
  PlatformProfile a, b;
  a.uninit_seed = b.uninit_seed = 5;
  EXPECT_EQ(effective_profile(a, 1), effective_profile(b, 1));
  EXPECT_NE(effective_profile(a, 1).uninit_seed, effective_profile(a, 2).uninit_seed);
  b.uninit_seed = 6;
  EXPECT_NE(effective_profile(a, 1).uninit_seed, effective_profile(b, 1).uninit_seed);
}

NodeRecord record(const std::string& id, std::vector<TxReceipt> receipts, Role role = Role::Validator) {
  NodeRecord n;
  n.spec.id = id;
  n.spec.role = role;
  n.receipts_at[1] = std::move(receipts);
  return n;
}

TxReceipt receipt(const Digest& id, std::vector<std::string> recipients) {
  TxReceipt r;
  r.tx_id = id;
  for (const std::string& to : recipients) r.credits.push_back({"TKN", "contract", to, 5});
  return r;
}

TEST(DetectDoubleSpend, AgreementIsSilent) {
  WorldState w;
  const Digest t = hash256("t");
  w.nodes = {record("n1", {receipt(t, {"A"})}), record("n2", {receipt(t, {"A"})})};
  EXPECT_TRUE(detect_double_spend(w).empty());
}

TEST(DetectDoubleSpend, DifferentRecipients) {
  WorldState w;
  const Digest t = hash256("t");
  w.nodes = {record("n1", {receipt(t, {"A"})}), record("n2", {receipt(t, {"B"})})};
  const auto events = detect_double_spend(w);
  ASSERT_EQ(events.size(), 1u);
  const auto& ds = std::get<DoubleSpend>(events[0]);
  EXPECT_EQ(ds.origin_tx, t);
  EXPECT_EQ(ds.token, "TKN");
  EXPECT_EQ(ds.height, 1u);
  EXPECT_EQ(ds.credited, (std::vector<std::pair<std::string, std::string>>{{"n1", "A"}, {"n2", "B"}}));
}

TEST(DetectDoubleSpend, RepeatedCreditToSameAccount) {
  WorldState w;
  const Digest t1 = hash256("t1"), t2 = hash256("t2");
  w.nodes = {record("n1", {receipt(t1, {"x"}), receipt(t2, {"A"})}),
             record("n2", {receipt(t1, {"x"}), receipt(t2, {"A"}), receipt(t2, {"A"})})};
  const auto events = detect_double_spend(w);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(std::get<DoubleSpend>(events[0]).origin_tx, t2);
}

TEST(DetectDoubleSpend, DifferentTransactionsSpendSameFunds) {
  WorldState w;
  const Digest t1 = hash256("t1"), t2 = hash256("t2");
  w.nodes = {record("n1", {receipt(t1, {"A"})}), record("n2", {receipt(t2, {"B"})})};
  const auto events = detect_double_spend(w);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(std::get<DoubleSpend>(events[0]).origin_tx, t1);
}

TEST(DetectDoubleSpend, IgnoresAdversaryAndLoneNodes) {
  WorldState w;
  const Digest t = hash256("t");
  w.nodes = {record("n1", {receipt(t, {"A"})}), record("m", {receipt(t, {"B"})}, Role::Adversary)};
  EXPECT_TRUE(detect_double_spend(w).empty());
}

TEST(DetectForks, DigestsDisagree) {
  WorldState w;
  NodeRecord a, b;
  a.spec.id = "a";
  b.spec.id = "b";
  a.state_digest_at[1] = hash256("x");
  b.state_digest_at[1] = hash256("y");
  w.nodes = {a, b};
  const auto events = detect_forks(w);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(std::get<ForkDetected>(events[0]).digests.size(), 2u);
}

TEST(Vrf, ZeroKeyAdversaryUnderBothPolicies) {
  WorldSpec w;
  w.nodes = {{"P", Role::Producer, {}, {}}, {"V1", Role::Validator, {}, {}}, {"V2", Role::Validator, {}, {}},
             {"M", Role::Adversary, {}, {}}};
  w.vrf = VrfRounds{64, vrf::KeyPolicy::Lax, 0};
  const WorldState lax = run_world(w, 7);
  ASSERT_TRUE(lax.vrf.has_value());
  EXPECT_EQ(lax.vrf->rounds, 64u);
  EXPECT_EQ(lax.vrf->adversary_eligible_rounds, 64u);
  EXPECT_EQ(lax.vrf->adversary_distinct_betas, 1u);
  EXPECT_EQ(lax.vrf->adversary_beta, vrf::degenerate_beta());
  EXPECT_EQ(count(lax, "LeaderElected"), 64u);

  w.vrf->policy = vrf::KeyPolicy::Strict;
  const WorldState strict = run_world(w, 7);
  EXPECT_EQ(strict.vrf->adversary_wins, 0u);
  EXPECT_EQ(strict.vrf->adversary_eligible_rounds, 0u);
  EXPECT_GE(strict.vrf->distinct_leaders, 2u);
}

TEST(Strings, RoleAndMutation) {
  for (Role r : {Role::Producer, Role::Validator, Role::Adversary}) EXPECT_EQ(role_from_string(to_string(r)), r);
  for (MutationKind m : {MutationKind::None, MutationKind::StripWitness, MutationKind::AppendDuplicateLastTx}) {
    EXPECT_EQ(mutation_kind_from_string(to_string(m)), m);
  }
}

}  // namespace
}  // namespace forkbench
