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

#include "forkbench/hashcore.hpp"

#include <openssl/evp.h>

#include <stdexcept>
#include <vector>

namespace forkbench {

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

Digest Digest::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw std::invalid_argument("digest hex must be 64 characters");
  Bytes raw = forkbench::from_hex(hex);
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

Digest hash256(ByteView data) {
  Digest out;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.bytes.size()) {
    throw std::runtime_error("EVP_Digest(sha256) failed");
  }
  return out;
}

std::string_view to_string(MerkleMode mode) {
  switch (mode) {
    case MerkleMode::VulnerableDuplicateLast:
      return "VulnerableDuplicateLast";
    case MerkleMode::HardenedCountCommitted:
      return "HardenedCountCommitted";
  }
  return "?";
}

MerkleMode merkle_mode_from_string(std::string_view name) {
  if (name == "VulnerableDuplicateLast") return MerkleMode::VulnerableDuplicateLast;
  if (name == "HardenedCountCommitted") return MerkleMode::HardenedCountCommitted;
  throw std::invalid_argument("unknown merkle mode: " + std::string(name));
}

namespace {

Digest duplicate_last_root(std::span<const Digest> leaves) {
  std::vector<Digest> level(leaves.begin(), leaves.end());
  Bytes buf;
  buf.reserve(64);
  while (level.size() > 1) {
    if (level.size() % 2 != 0) level.push_back(level.back());
    std::vector<Digest> parents;
    parents.reserve(level.size() / 2);
    for (size_t i = 0; i < level.size(); i += 2) {
      buf.clear();
      append(buf, level[i].view());
      append(buf, level[i + 1].view());
      parents.push_back(hash256(buf));
    }
    level = std::move(parents);
  }
  return level.front();
}

}  // namespace

Digest merkle_root(std::span<const Digest> leaves, MerkleMode mode) {
  if (leaves.empty()) throw EmptyLeaves();
  Digest root = duplicate_last_root(leaves);
  if (mode == MerkleMode::VulnerableDuplicateLast) return root;

  Bytes framed;
  put_le64(framed, leaves.size());
  append(framed, root.view());
  return hash256(framed);
}

}  // namespace forkbench
