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

// Write-set commitment.
//
// A block producer records every database write performed while running the
// block's transactions, hashes the sequence, and puts the hash in the block
// header. A receiving node records its own sequence while executing the same
// block and refuses to commit when the two hashes disagree. Only writes are
// recorded; reads never enter the log.
//
// Encoded op (frozen, bit-exact):
//
//   tag(1) || LE32 |space| || space || LE32 |key| || key || LE32 |value| || value
//
// with tag 0x01 = Put, 0x02 = Delete (value empty). The sequence hash is
//
//   hash256(LE64(n) || enc(op_1) || ... || enc(op_n))

#pragma once

#include <string>
#include <vector>

#include "forkbench/bytes.hpp"
#include "forkbench/hashcore.hpp"

namespace forkbench {

enum class WriteKind : uint8_t { Put = 0x01, Delete = 0x02 };

struct WriteOp {
  WriteKind kind = WriteKind::Put;
  std::string space;
  Bytes key;
  Bytes value;

  static WriteOp put(std::string space, Bytes key, Bytes value) {
    return {WriteKind::Put, std::move(space), std::move(key), std::move(value)};
  }
  static WriteOp erase(std::string space, Bytes key) {
    return {WriteKind::Delete, std::move(space), std::move(key), {}};
  }

  bool operator==(const WriteOp&) const = default;
};

/// Ordered, append-only record of the writes made by one block run.
class WriteLog {
 public:
  WriteLog() = default;
  explicit WriteLog(std::vector<WriteOp> ops) : ops_(std::move(ops)) {}

  void append(WriteOp op) { ops_.push_back(std::move(op)); }
  void append(const WriteLog& other) { ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end()); }

  const std::vector<WriteOp>& ops() const { return ops_; }
  size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  bool operator==(const WriteLog&) const = default;

 private:
  std::vector<WriteOp> ops_;
};

Bytes encode_write_op(const WriteOp& op);

Digest write_set_hash(const WriteLog& log);

enum class WriteSetCheck { Consistent, Divergent };

WriteSetCheck check_write_set(const WriteLog& local, const Digest& committed);

}  // namespace forkbench
