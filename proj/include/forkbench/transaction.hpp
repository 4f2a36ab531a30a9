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

#include <cstdint>

#include "forkbench/bytes.hpp"
#include "forkbench/hashcore.hpp"

namespace forkbench {

/// The executable body of a transaction. Its serialization is the only input
/// to the transaction id:
///
///   LE64 nonce || LE64 gas_limit || LE32 |script| || script
struct UnsignedTx {
  uint64_t nonce = 0;
  Bytes script;
  uint64_t gas_limit = 0;

  bool operator==(const UnsignedTx&) const = default;
};

struct Witness {
  Bytes verification_script;

  bool operator==(const Witness&) const = default;
};

/// The witness rides alongside the body but never enters the id, so two
/// transactions that differ only in their witness share an id.
struct Transaction {
  UnsignedTx body;
  Witness witness;

  bool operator==(const Transaction&) const = default;
};

Bytes serialize_unsigned(const UnsignedTx& tx);

/// LE32 |verification_script| || verification_script
Bytes serialize_witness(const Witness& w);

Digest tx_id(const Transaction& tx);

}  // namespace forkbench
