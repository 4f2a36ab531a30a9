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

// Deterministic world simulation: one producer, any number of validators,
// at most one adversary that decides which (possibly mutated) block each
// validator sees. A node approves a payment the moment persist_block commits.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "forkbench/ledger.hpp"
#include "forkbench/vrfsel.hpp"

namespace forkbench {

enum class Role { Producer, Validator, Adversary };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);

struct NodeSpec {
  std::string id;
  Role role = Role::Validator;
  PlatformProfile profile;
  VerificationConfig cfg;
};

enum class MutationKind { None, StripWitness, AppendDuplicateLastTx };

std::string_view to_string(MutationKind m);
MutationKind mutation_kind_from_string(std::string_view s);

struct Mutation {
  MutationKind kind = MutationKind::None;
  // StripWitness only.
  size_t tx_index = 0;
};

class BadIndex : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The header is never touched: StripWitness relies on ids ignoring the
/// witness, AppendDuplicateLastTx on odd-count Merkle duplication.
Block adversary_mutate(const Block& block, const Mutation& mutation);

struct Delivery {
  size_t block = 0;
  std::string to;
  Mutation mutation;
};

struct GenesisBalance {
  std::string token;
  std::string account;
  uint64_t amount = 0;
};

struct VrfRounds {
  uint64_t rounds = 64;
  vrf::KeyPolicy policy = vrf::KeyPolicy::Lax;
  // Secret key used by the adversary node.
  uint64_t adversary_key = 0;
};

/// Compiled scenario: scripts are bytecode, ids are resolved.
struct WorldSpec {
  std::vector<NodeSpec> nodes;
  std::vector<GenesisBalance> genesis;
  Bytes verification_script;
  std::vector<std::vector<Transaction>> blocks;
  // Empty: every block goes unmodified to every validator.
  std::vector<Delivery> deliveries;
  std::optional<VrfRounds> vrf;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- events ---

struct BlockAccepted {
  std::string node;
  Digest block;
  uint64_t height = 0;
};

struct BlockRejected {
  std::string node;
  Digest block;
  uint64_t height = 0;
  std::string reason;
};

struct ForkDetected {
  uint64_t height = 0;
  // Distinct committed state digests, sorted.
  std::vector<Digest> digests;
};

struct DoubleSpend {
  std::string token;
  Digest origin_tx;
  uint64_t height = 0;
  // (node, credited account), one entry per credit.
  std::vector<std::pair<std::string, std::string>> credited;
};

struct DivergenceRefused {
  std::string node;
  uint64_t height = 0;
  Digest expected;
  Digest got;
};

struct LeaderElected {
  uint64_t round = 0;
  std::string leader;
  Digest beta;
};

using Event =
    std::variant<BlockAccepted, BlockRejected, ForkDetected, DoubleSpend, DivergenceRefused, LeaderElected>;

std::string_view event_kind(const Event& e);

// --- world ---

struct NodeRecord {
  NodeSpec spec;
  // Profile after mixing in the run seed.
  PlatformProfile effective_profile;
  LedgerState state;
  std::map<uint64_t, Digest> state_digest_at;
  std::map<uint64_t, std::vector<TxReceipt>> receipts_at;
};

struct VrfStats {
  uint64_t rounds = 0;
  uint64_t adversary_wins = 0;
  uint64_t adversary_eligible_rounds = 0;
  uint64_t distinct_leaders = 0;
  // Distinct beta values the adversary produced across rounds.
  uint64_t adversary_distinct_betas = 0;
  std::optional<Digest> adversary_beta;
};

struct WorldState {
  std::vector<NodeRecord> nodes;
  std::vector<Event> trace;
  std::optional<VrfStats> vrf;
};

/// Seeds in the profile are mixed with the run seed; equal inputs stay equal.
PlatformProfile effective_profile(const PlatformProfile& profile, uint64_t seed);

/// Throws ScenarioError for malformed specs. Detector events are appended to
/// the trace after all deliveries.
WorldState run_world(const WorldSpec& spec, uint64_t seed);

/// For each (height, token, debited account), compares the credits of every
/// node that committed at least one such credit. Differing credit sequences
/// yield one DoubleSpend naming the first transaction where they part.
std::vector<Event> detect_double_spend(const WorldState& world);

/// Heights at which committed state digests disagree across non-adversary nodes.
std::vector<Event> detect_forks(const WorldState& world);

}  // namespace forkbench
