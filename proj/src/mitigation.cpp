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

#include "forkbench/mitigation.hpp"

namespace forkbench {

namespace {

void encode_into(Bytes& out, const WriteOp& op) {
  out.push_back(static_cast<uint8_t>(op.kind));
  put_le32(out, static_cast<uint32_t>(op.space.size()));
  append(out, op.space);
  put_le32(out, static_cast<uint32_t>(op.key.size()));
  append(out, op.key);
  // Delete carries an empty value field regardless of what the struct holds.
  if (op.kind == WriteKind::Delete) {
    put_le32(out, 0);
    return;
  }
  put_le32(out, static_cast<uint32_t>(op.value.size()));
  append(out, op.value);
}

}  // namespace

Bytes encode_write_op(const WriteOp& op) {
  Bytes out;
  encode_into(out, op);
  return out;
}

Digest write_set_hash(const WriteLog& log) {
  Bytes buf;
  put_le64(buf, log.size());
  for (const WriteOp& op : log.ops()) encode_into(buf, op);
  return hash256(buf);
}

WriteSetCheck check_write_set(const WriteLog& local, const Digest& committed) {
  return write_set_hash(local) == committed ? WriteSetCheck::Consistent : WriteSetCheck::Divergent;
}

}  // namespace forkbench
