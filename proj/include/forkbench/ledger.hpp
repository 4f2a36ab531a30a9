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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forkbench/hashcore.hpp"
#include "forkbench/mitigation.hpp"
#include "forkbench/scriptvm.hpp"
#include "forkbench/state.hpp"
#include "forkbench/transaction.hpp"

namespace forkbench {

using ValidatorId = std::string;

struct BlockHeader {
  uint64_t height = 0;
  Digest prev;
  Digest merkle_root;
  // Present iff the producer ran with write_set_check enabled.
  std::optional<Digest> write_db_hash;
  ValidatorId producer;

  bool operator==(const BlockHeader&) const = default;
};

/// LE64 height || prev || merkle_root || u8 has_write_db_hash
///   || [write_db_hash] || LE32 |producer| || producer
Bytes serialize_header(const BlockHeader& header);

Digest block_digest(const BlockHeader& header);

struct Block {
  BlockHeader header;
  std::vector<Transaction> txs;

  bool operator==(const Block&) const = default;
};

std::vector<Digest> tx_ids(const std::vector<Transaction>& txs);

enum class WitnessMode { VulnerableEmptyPasses, HardenedExactMatch };

std::string_view to_string(WitnessMode m);
WitnessMode witness_mode_from_string(std::string_view s);

struct VerificationConfig {
  MerkleMode merkle_mode = MerkleMode::HardenedCountCommitted;
  WitnessMode witness_mode = WitnessMode::HardenedExactMatch;
  bool duplicate_tx_check = true;
  // Skip per-transaction witness checks for blocks from the consensus set.
  bool trust_persisted_blocks = false;
  bool write_set_check = true;

  static VerificationConfig all_hardened() { return {}; }

  bool operator==(const VerificationConfig&) const = default;
};

/// An empty witness slips through VulnerableEmptyPasses; HardenedExactMatch
/// requires a byte-exact, non-empty match.
bool verify_witness(const Transaction& tx, ByteView expected_script, WitnessMode mode);

enum class InvalidReason { BadLink, BadMerkleRoot, DuplicateTx, BadWitness };

std::string_view to_string(InvalidReason r);

struct ValidationResult {
  std::optional<InvalidReason> failure;

  bool valid() const { return !failure.has_value(); }
  bool operator==(const ValidationResult&) const = default;
};

/// Checks, in order: linkage to `state`, Merkle root under cfg.merkle_mode,
/// duplicate ids (if enabled), witnesses against the contract's registered
/// verification script (unless persisted blocks are trusted).
ValidationResult validate_block(const Block& block, const LedgerState& state,
                                const VerificationConfig& cfg);

struct TxReceipt {
  Digest tx_id;
  std::optional<AbortReason> abort;
  std::vector<Credit> credits;
  uint64_t steps_used = 0;

  bool operator==(const TxReceipt&) const = default;
};

struct BlockExecution {
  WriteLog log;
  std::vector<TxReceipt> receipts;
};

/// Runs every transaction in order as kContractAccount. Each transaction sees
/// the writes of the ones before it; aborted ones contribute nothing.
BlockExecution execute_block(const std::vector<Transaction>& txs, const LedgerState& state,
                             const PlatformProfile& profile);

enum class RefusalReason { DivergentExecution, MissingWriteSetHash };

std::string_view to_string(RefusalReason r);

struct Committed {
  LedgerState state;
  WriteLog log;
  std::vector<TxReceipt> receipts;
};

struct Refused {
  RefusalReason reason;
  // Header commitment (zero when missing) and the locally computed hash.
  Digest expected;
  Digest got;
};

using PersistResult = std::variant<Committed, Refused>;

/// Expects validate_block to have passed. On Refused the caller's state is
/// untouched; on Committed the returned state advances height and tip.
PersistResult persist_block(const Block& block, const LedgerState& state,
                            const VerificationConfig& cfg, const PlatformProfile& profile);

/// Throws std::invalid_argument when `txs` is empty.
Block make_block(std::vector<Transaction> txs, const LedgerState& parent, const ValidatorId& producer,
                 const VerificationConfig& cfg, const PlatformProfile& profile);

}  // namespace forkbench
