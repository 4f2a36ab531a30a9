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

// Built-in scenarios. Every payment moves TKN out of the "contract" account.

#include "forkbench/scenario.hpp"

namespace forkbench {
namespace {

constexpr const char* kToken = "TKN";
constexpr const char* kRegisteredScript = "PUSH_INT 1\nHALT\n";

std::string pay(const std::string& to, uint64_t amount) {
  return "PUSH_BYTES \"" + to + "\"\nPUSH_INT " + std::to_string(amount) + "\nTRANSFER " + kToken + "\n";
}

// Branch on the value on top of the stack: non-zero pays A, zero pays B.
std::string branch_pay(uint64_t amount) {
  return "JZ pay_b\n" + pay("A", amount) + "HALT\npay_b:\n" + pay("B", amount) + "HALT\n";
}

TxText honest_tx(uint64_t nonce, std::string script) {
  TxText tx;
  tx.nonce = nonce;
  tx.script = std::move(script);
  tx.witness = kRegisteredScript;
  return tx;
}

VerificationConfig mitigation_off() {
  VerificationConfig c = VerificationConfig::all_hardened();
  c.write_set_check = false;
  return c;
}

NodeSpec node(std::string id, Role role, VerificationConfig cfg, PlatformProfile profile = {}) {
  return NodeSpec{std::move(id), role, profile, cfg};
}

ScenarioSpec base(std::string name, std::string reference, std::string description, Expectation e) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.reference = std::move(reference);
  s.description = std::move(description);
  s.expectation = e;
  s.verification_script = kRegisteredScript;
  s.genesis = {GenesisBalance{kToken, std::string(kContractAccount), 100}};
  return s;
}

ScenarioSpec with_mitigation(ScenarioSpec s, std::string name, std::string description) {
  s.name = std::move(name);
  s.description = std::move(description);
  s.expectation = Expectation::ExpectRefusal;
  for (NodeSpec& n : s.nodes) n.cfg.write_set_check = true;
  return s;
}

ScenarioSpec honest_baseline() {
  ScenarioSpec s = base("S0-honest-baseline", "baseline: honest producer, identical validators",
                        "Two blocks of ordinary payments under fully hardened validation.",
                        Expectation::ExpectClean);
  const VerificationConfig cfg = VerificationConfig::all_hardened();
  s.nodes = {node("P", Role::Producer, cfg), node("V1", Role::Validator, cfg), node("V2", Role::Validator, cfg)};
  s.blocks = {{honest_tx(1, pay("alice", 5) + "HALT\n")},
              {honest_tx(2, pay("bob", 3) + "HALT\n"), honest_tx(3, pay("carol", 2) + "HALT\n")}};
  return s;
}

ScenarioSpec witness_bypass() {
  ScenarioSpec s = base("S1-witness-bypass", "insufficient verification: empty witness accepted",
                        "The contract pays A when it sees a witness and B when it does not. The "
                        "adversary strips the witness from VB's copy; tx ids exclude witnesses, so "
                        "the header still matches.",
                        Expectation::ExpectDoubleSpend);
  VerificationConfig cfg = mitigation_off();
  cfg.witness_mode = WitnessMode::VulnerableEmptyPasses;
  s.nodes = {node("P", Role::Producer, cfg), node("M", Role::Adversary, cfg),
             node("VA", Role::Validator, cfg), node("VB", Role::Validator, cfg)};
  s.blocks = {{honest_tx(1, "GET_WITNESS_SCRIPT\n" + branch_pay(5))}};
  s.deliveries = {{0, "VA", {}}, {0, "VB", {MutationKind::StripWitness, 0}}};
  return s;
}

ScenarioSpec merkle_dup() {
  ScenarioSpec s = base("S2-merkle-dup", "insufficient verification: Merkle duplicate-leaf malleation",
                        "Three transactions; VB receives the block with the last one appended again. "
                        "The duplicate-last Merkle rule gives both lists the same root, so VB executes "
                        "the final payment twice.",
                        Expectation::ExpectDoubleSpend);
  VerificationConfig cfg = mitigation_off();
  cfg.merkle_mode = MerkleMode::VulnerableDuplicateLast;
  cfg.duplicate_tx_check = false;
  cfg.trust_persisted_blocks = true;
  s.nodes = {node("P", Role::Producer, cfg), node("M", Role::Adversary, cfg),
             node("VA", Role::Validator, cfg), node("VB", Role::Validator, cfg)};
  s.blocks = {{honest_tx(1, pay("alice", 5) + "HALT\n"), honest_tx(2, pay("bob", 5) + "HALT\n"),
               honest_tx(3, pay("A", 10) + "HALT\n")}};
  s.deliveries = {{0, "VA", {}}, {0, "VB", {MutationKind::AppendDuplicateLastTx, 0}}};
  return s;
}

// One producer and seven validators with distinct residue seeds, so a fork
// fails to appear only when all eight nodes draw the same bit (1 in 128).
std::vector<NodeSpec> seeded_nodes(const VerificationConfig& cfg, PlatformProfile profile, bool oob) {
  std::vector<NodeSpec> nodes;
  for (uint64_t i = 0; i < 8; ++i) {
    PlatformProfile p = profile;
    (oob ? p.oob_seed : p.uninit_seed) = 1000 + i;
    nodes.push_back(node(i == 0 ? "P" : "V" + std::to_string(i), i == 0 ? Role::Producer : Role::Validator, cfg, p));
  }
  return nodes;
}

ScenarioSpec uninit_memory() {
  ScenarioSpec s = base("S3-uninit-memory", "VM inconsistency: uninitialized memory after grow",
                        "Freshly grown memory holds host residue; the contract branches on the top bit "
                        "of byte 0.",
                        Expectation::ExpectDoubleSpend);
  PlatformProfile p;
  p.uninit_mode = UninitMode::HostRandom;
  s.nodes = seeded_nodes(mitigation_off(), p, false);
  s.blocks = {{honest_tx(1,
                         "PUSH_INT 1\nGROW_MEMORY\nDROP\nPUSH_INT 0\nMEM_LOAD 1\nPUSH_INT 128\nBIGDIV\n" +
                             branch_pay(5))}};
  return s;
}

ScenarioSpec oob_read() {
  ScenarioSpec s = base("S4-oob-read", "VM inconsistency: signed bounds check admits a negative address",
                        "A 4-byte load at address -1 passes the signed check and reads one byte of host "
                        "memory below the linear buffer.",
                        Expectation::ExpectDoubleSpend);
  PlatformProfile p;
  p.bounds_mode = BoundsMode::VulnerableSigned;
  s.nodes = seeded_nodes(mitigation_off(), p, true);
  s.blocks = {{honest_tx(1, "PUSH_INT 1\nGROW_MEMORY\nDROP\nPUSH_INT -1\nMEM_LOAD 4\nPUSH_INT 128\nBIGDIV\n" +
                                branch_pay(5))}};
  return s;
}

ScenarioSpec memcmp_fork() {
  ScenarioSpec s = base("S5-memcmp", "VM inconsistency: memcmp return convention",
                        "The contract tests memcmp(\"a\\x01\", \"a\\x10\") == -1. Raw platforms return "
                        "-15 and pay B, normalized ones return -1 and pay A.",
                        Expectation::ExpectDoubleSpend);
  PlatformProfile raw;
  raw.memcmp_mode = MemcmpMode::Raw;
  PlatformProfile normalized;
  normalized.memcmp_mode = MemcmpMode::Normalized;
  const VerificationConfig cfg = mitigation_off();
  s.nodes = {node("P", Role::Producer, cfg, raw), node("V1", Role::Validator, cfg, raw),
             node("V2", Role::Validator, cfg, normalized)};
  s.blocks = {{honest_tx(1, "PUSH_BYTES \"a\\x01\"\nPUSH_BYTES \"a\\x10\"\nMEMCMP\nPUSH_INT -1\nEQ\n" +
                                branch_pay(5))}};
  return s;
}

ScenarioSpec bigdiv_fork() {
  ScenarioSpec s = base("S6-bigdiv", "VM inconsistency: big-integer division rounding",
                        "The contract tests -7 / 2 == -3. Truncating platforms pay A, flooring ones "
                        "compute -4 and pay B.",
                        Expectation::ExpectDoubleSpend);
  PlatformProfile trunc;
  trunc.bigdiv_mode = BigDivMode::TruncTowardZero;
  PlatformProfile floor;
  floor.bigdiv_mode = BigDivMode::Floor;
  const VerificationConfig cfg = mitigation_off();
  s.nodes = {node("P", Role::Producer, cfg, trunc), node("V1", Role::Validator, cfg, trunc),
             node("V2", Role::Validator, cfg, floor)};
  s.blocks = {{honest_tx(1, "PUSH_INT -7\nPUSH_INT 2\nBIGDIV\nPUSH_INT -3\nEQ\n" + branch_pay(5))}};
  return s;
}

ScenarioSpec vrf_zero_key() {
  ScenarioSpec s = base("S7-vrf-zero-key", "consensus randomness: zero VRF secret key",
                        "The adversary registers x = 0. Its gamma is the identity, so its VRF output "
                        "is the same in every round and it is never excluded under the lax key policy.",
                        Expectation::ExpectLeaderCapture);
  const VerificationConfig cfg = VerificationConfig::all_hardened();
  s.nodes = {node("P", Role::Producer, cfg), node("V1", Role::Validator, cfg), node("V2", Role::Validator, cfg),
             node("V3", Role::Validator, cfg), node("V4", Role::Validator, cfg), node("M", Role::Adversary, cfg)};
  s.vrf = VrfRounds{64, vrf::KeyPolicy::Lax, 0};
  return s;
}

ScenarioSpec oom_divergence() {
  ScenarioSpec s = base("S9-oom-divergence", "VM inconsistency: memory limit differs between nodes",
                        "The contract holds 5 TKN. tx1 grows memory by 8 pages then pays A; tx2 pays B. "
                        "A node capped at 4 pages aborts tx1 and lets tx2 through.",
                        Expectation::ExpectDoubleSpend);
  s.genesis = {GenesisBalance{kToken, std::string(kContractAccount), 5}};
  PlatformProfile roomy;
  roomy.max_pages = 16;
  PlatformProfile tight;
  tight.max_pages = 4;
  const VerificationConfig cfg = mitigation_off();
  s.nodes = {node("P", Role::Producer, cfg, roomy), node("V1", Role::Validator, cfg, roomy),
             node("V2", Role::Validator, cfg, tight)};
  s.blocks = {{honest_tx(1, "PUSH_INT 8\nGROW_MEMORY\nDROP\n" + pay("A", 5) + "HALT\n"),
               honest_tx(2, pay("B", 5) + "HALT\n")}};
  return s;
}

std::vector<ScenarioSpec> build_catalog() {
  std::vector<ScenarioSpec> out;
  out.push_back(honest_baseline());
  out.push_back(witness_bypass());
  out.push_back(merkle_dup());
  out.push_back(uninit_memory());
  out.push_back(oob_read());
  out.push_back(memcmp_fork());
  out.push_back(bigdiv_fork());
  out.push_back(vrf_zero_key());
  out.push_back(oom_divergence());

  out.push_back(with_mitigation(witness_bypass(), "S8.1-witness-bypass-mitigated",
                                "S1 with write-set hashing on; witness checking stays vulnerable."));
  out.push_back(with_mitigation(merkle_dup(), "S8.2-merkle-dup-mitigated",
                                "S2 with write-set hashing on; the Merkle rule stays vulnerable."));
  out.push_back(with_mitigation(uninit_memory(), "S8.3-uninit-memory-mitigated",
                                "S3 with write-set hashing on."));
  out.push_back(with_mitigation(oob_read(), "S8.4-oob-read-mitigated", "S4 with write-set hashing on."));
  out.push_back(with_mitigation(memcmp_fork(), "S8.5-memcmp-mitigated", "S5 with write-set hashing on."));
  out.push_back(with_mitigation(bigdiv_fork(), "S8.6-bigdiv-mitigated", "S6 with write-set hashing on."));

  ScenarioSpec strict = vrf_zero_key();
  strict.name = "S8.7-vrf-zero-key-hardened";
  strict.description = "S7 under the strict key policy, which refuses the identity public key.";
  strict.expectation = Expectation::ExpectClean;
  strict.vrf->policy = vrf::KeyPolicy::Strict;
  out.push_back(std::move(strict));
  return out;
}

}  // namespace

const std::vector<ScenarioSpec>& catalog() {
  static const std::vector<ScenarioSpec> entries = build_catalog();
  return entries;
}

}  // namespace forkbench
