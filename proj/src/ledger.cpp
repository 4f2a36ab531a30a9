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

#include "forkbench/ledger.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace forkbench {

Bytes serialize_header(const BlockHeader& header) {
  Bytes out;
  put_le64(out, header.height);
  append(out, header.prev.view());
  append(out, header.merkle_root.view());
  out.push_back(header.write_db_hash ? 1 : 0);
  if (header.write_db_hash) append(out, header.write_db_hash->view());
  put_le32(out, static_cast<uint32_t>(header.producer.size()));
  append(out, header.producer);
  return out;
}

Digest block_digest(const BlockHeader& header) { return hash256(serialize_header(header)); }

std::vector<Digest> tx_ids(const std::vector<Transaction>& txs) {
  std::vector<Digest> ids;
  ids.reserve(txs.size());
  for (const Transaction& tx : txs) ids.push_back(tx_id(tx));
  return ids;
}

std::string_view to_string(WitnessMode m) {
  return m == WitnessMode::VulnerableEmptyPasses ? "VulnerableEmptyPasses" : "HardenedExactMatch";
}

WitnessMode witness_mode_from_string(std::string_view s) {
  if (s == "VulnerableEmptyPasses") return WitnessMode::VulnerableEmptyPasses;
  if (s == "HardenedExactMatch") return WitnessMode::HardenedExactMatch;
  throw std::invalid_argument("unknown witness mode: " + std::string(s));
}

std::string_view to_string(InvalidReason r) {
  switch (r) {
    case InvalidReason::BadLink: return "BadLink";
    case InvalidReason::BadMerkleRoot: return "BadMerkleRoot";
    case InvalidReason::DuplicateTx: return "DuplicateTx";
    case InvalidReason::BadWitness: return "BadWitness";
  }
  return "?";
}

std::string_view to_string(RefusalReason r) {
  return r == RefusalReason::DivergentExecution ? "DivergentExecution" : "MissingWriteSetHash";
}

bool verify_witness(const Transaction& tx, ByteView expected_script, WitnessMode mode) {
  const Bytes& got = tx.witness.verification_script;
  const bool exact = std::equal(got.begin(), got.end(), expected_script.begin(), expected_script.end());
  if (mode == WitnessMode::VulnerableEmptyPasses) return exact || got.empty();
  return exact && !expected_script.empty();
}

ValidationResult validate_block(const Block& block, const LedgerState& state,
                                const VerificationConfig& cfg) {
  const BlockHeader& h = block.header;
  if (h.height != state.height + 1 || h.prev != state.tip) return {InvalidReason::BadLink};

  if (block.txs.empty()) return {InvalidReason::BadMerkleRoot};
  const std::vector<Digest> ids = tx_ids(block.txs);
  if (merkle_root(ids, cfg.merkle_mode) != h.merkle_root) return {InvalidReason::BadMerkleRoot};

  if (cfg.duplicate_tx_check) {
    std::set<Digest> seen;
    for (const Digest& id : ids) {
      if (!seen.insert(id).second) return {InvalidReason::DuplicateTx};
    }
  }

  if (!cfg.trust_persisted_blocks) {
    for (const Transaction& tx : block.txs) {
      if (!verify_witness(tx, state.verification_script, cfg.witness_mode)) {
        return {InvalidReason::BadWitness};
      }
    }
  }
  return {};
}

BlockExecution execute_block(const std::vector<Transaction>& txs, const LedgerState& state,
                             const PlatformProfile& profile) {
  BlockExecution result;
  LedgerState working = state;
  for (const Transaction& tx : txs) {
    ExecContext ctx{tx, std::string(kContractAccount), working};
    ExecOutcome outcome = execute_script(tx.body.script, ctx, profile, tx.body.gas_limit);

    TxReceipt receipt;
    receipt.tx_id = tx_id(tx);
    receipt.abort = outcome.abort;
    receipt.steps_used = outcome.steps_used;
    if (outcome.halted()) {
      for (const WriteOp& op : outcome.log.ops()) apply_write(working.balances, op);
      result.log.append(outcome.log);
      receipt.credits = std::move(outcome.credits);
    }
    result.receipts.push_back(std::move(receipt));
  }
  return result;
}

PersistResult persist_block(const Block& block, const LedgerState& state,
                            const VerificationConfig& cfg, const PlatformProfile& profile) {
  BlockExecution run = execute_block(block.txs, state, profile);

  if (cfg.write_set_check) {
    const Digest local = write_set_hash(run.log);
    if (!block.header.write_db_hash) {
      return Refused{RefusalReason::MissingWriteSetHash, Digest{}, local};
    }
    if (check_write_set(run.log, *block.header.write_db_hash) == WriteSetCheck::Divergent) {
      return Refused{RefusalReason::DivergentExecution, *block.header.write_db_hash, local};
    }
  }

  LedgerState next = apply_write_log(state, run.log);
  next.height = block.header.height;
  next.tip = block_digest(block.header);
  return Committed{std::move(next), std::move(run.log), std::move(run.receipts)};
}

Block make_block(std::vector<Transaction> txs, const LedgerState& parent, const ValidatorId& producer,
                 const VerificationConfig& cfg, const PlatformProfile& profile) {
  if (txs.empty()) throw std::invalid_argument("make_block: transaction list is empty");

  Block block;
  block.header.height = parent.height + 1;
  block.header.prev = parent.tip;
  block.header.merkle_root = merkle_root(tx_ids(txs), cfg.merkle_mode);
  block.header.producer = producer;
  if (cfg.write_set_check) {
    block.header.write_db_hash = write_set_hash(execute_block(txs, parent, profile).log);
  }
  block.txs = std::move(txs);
  return block;
}

}  // namespace forkbench
