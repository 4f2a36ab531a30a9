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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "forkbench/bytes.hpp"

namespace forkbench {

/// A 32-byte hash value. Used for transaction ids, Merkle roots, block
/// digests, state digests and write-set commitments alike.
struct Digest {
  std::array<uint8_t, 32> bytes{};

  ByteView view() const { return bytes; }
  std::string hex() const { return to_hex(bytes); }

  /// Throws std::invalid_argument unless `hex` is exactly 64 hex characters.
  static Digest from_hex(std::string_view hex);

  auto operator<=>(const Digest&) const = default;
};

/// SHA-256, applied once.
Digest hash256(ByteView data);
inline Digest hash256(std::string_view data) {
  return hash256(ByteView(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

enum class MerkleMode {
  // Odd levels duplicate their last node; L and L ++ [last(L)] collide.
  VulnerableDuplicateLast,
  // hash256(LE64(leaf_count) || vulnerable_root).
  HardenedCountCommitted,
};

std::string_view to_string(MerkleMode mode);
MerkleMode merkle_mode_from_string(std::string_view name);

class EmptyLeaves : public std::invalid_argument {
 public:
  EmptyLeaves() : std::invalid_argument("merkle_root: leaf list is empty") {}
};

Digest merkle_root(std::span<const Digest> leaves, MerkleMode mode);

}  // namespace forkbench
