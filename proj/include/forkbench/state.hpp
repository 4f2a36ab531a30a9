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

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "forkbench/bytes.hpp"
#include "forkbench/hashcore.hpp"
#include "forkbench/mitigation.hpp"

namespace forkbench {

/// Every transaction runs as this account; genesis funds it.
inline constexpr std::string_view kContractAccount = "contract";

struct BalanceKey {
  std::string token;
  std::string account;

  auto operator<=>(const BalanceKey&) const = default;
};

/// Immutable-by-convention ledger snapshot. persist_block returns a fresh
/// value; nothing mutates a state that another node may hold.
struct LedgerState {
  std::map<BalanceKey, uint64_t> balances;
  uint64_t height = 0;
  // Digest of the last committed block header; all zero at genesis.
  Digest tip;
  // Verification script registered for kContractAccount.
  Bytes verification_script;

  uint64_t balance(const std::string& token, const std::string& account) const;

  /// hash256 over height, tip, verification script and the balances in key
  /// order (each string LE32 length-framed, amounts LE64).
  Digest digest() const;

  /// Sum of all balances of `token`.
  uint64_t supply(const std::string& token) const;
};

class MalformedWrite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Balance writes are Put(space = token, key = account, value = LE64 amount).
/// Delete removes the entry. Throws MalformedWrite on a Put whose value is not
/// exactly 8 bytes.
void apply_write(std::map<BalanceKey, uint64_t>& balances, const WriteOp& op);

LedgerState apply_write_log(const LedgerState& state, const WriteLog& log);

}  // namespace forkbench
