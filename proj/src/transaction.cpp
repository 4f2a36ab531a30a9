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

#include "forkbench/transaction.hpp"

#include "forkbench/state.hpp"

namespace forkbench {

Bytes serialize_unsigned(const UnsignedTx& tx) {
  Bytes out;
  out.reserve(20 + tx.script.size());
  put_le64(out, tx.nonce);
  put_le64(out, tx.gas_limit);
  put_le32(out, static_cast<uint32_t>(tx.script.size()));
  append(out, tx.script);
  return out;
}

Bytes serialize_witness(const Witness& w) {
  Bytes out;
  put_le32(out, static_cast<uint32_t>(w.verification_script.size()));
  append(out, w.verification_script);
  return out;
}

Digest tx_id(const Transaction& tx) { return hash256(serialize_unsigned(tx.body)); }

uint64_t LedgerState::balance(const std::string& token, const std::string& account) const {
  auto it = balances.find(BalanceKey{token, account});
  return it == balances.end() ? 0 : it->second;
}

uint64_t LedgerState::supply(const std::string& token) const {
  uint64_t total = 0;
  for (const auto& [key, amount] : balances) {
    if (key.token == token) total += amount;
  }
  return total;
}

Digest LedgerState::digest() const {
  Bytes buf;
  put_le64(buf, height);
  append(buf, tip.view());
  put_le32(buf, static_cast<uint32_t>(verification_script.size()));
  append(buf, verification_script);
  put_le64(buf, balances.size());
  for (const auto& [key, amount] : balances) {
    put_le32(buf, static_cast<uint32_t>(key.token.size()));
    append(buf, key.token);
    put_le32(buf, static_cast<uint32_t>(key.account.size()));
    append(buf, key.account);
    put_le64(buf, amount);
  }
  return hash256(buf);
}

void apply_write(std::map<BalanceKey, uint64_t>& balances, const WriteOp& op) {
  BalanceKey key{op.space, to_string(op.key)};
  if (op.kind == WriteKind::Delete) {
    balances.erase(key);
    return;
  }
  if (op.value.size() != 8) throw MalformedWrite("balance Put must carry an 8-byte value");
  balances[key] = get_le64(op.value);
}

LedgerState apply_write_log(const LedgerState& state, const WriteLog& log) {
  LedgerState next = state;
  for (const WriteOp& op : log.ops()) apply_write(next.balances, op);
  return next;
}

}  // namespace forkbench
