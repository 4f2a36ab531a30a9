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

// ECVRF-shaped verifiable random function over a toy prime-order group, and
// VRF-priority leader selection.
//
// The group is the order-q subgroup of quadratic residues mod the safe prime
// p = 2q + 1, written multiplicatively (the identity is 1). Prove follows the
// ECVRF flow:
//
//   y     = g^x
//   h     = hash_to_group(y, alpha)
//   gamma = h^x
//   k     = int(hash256(enc(x) || alpha)) mod q
//   c     = int(hash256(enc(g, h, y, gamma, g^k, h^k))) mod q
//   s     = (k - c*x) mod q
//   beta  = hash256(enc(gamma))
//
// With x = 0, gamma is the identity for every alpha and beta is constant.
// Digests are read as big-endian integers; enc() is LE64 per element.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forkbench/bytes.hpp"
#include "forkbench/hashcore.hpp"

namespace forkbench::vrf {

struct GroupParams {
  uint64_t p;
  uint64_t q;
  uint64_t g;
};

inline constexpr GroupParams kToyGroup{2039, 1019, 4};

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod);

/// q | p-1, g^q == 1, g != 1.
bool valid_params(const GroupParams& params);

/// 1 <= e < p and e^q == 1.
bool in_subgroup(uint64_t element, const GroupParams& params = kToyGroup);

/// LE64 of each value, concatenated.
Bytes encode(std::initializer_list<uint64_t> values);

/// Big-endian integer value of `d`, reduced mod m.
uint64_t digest_mod(const Digest& d, uint64_t m);

struct Keypair {
  uint64_t x = 0;
  uint64_t y = 1;

  static Keypair from_secret(uint64_t x, const GroupParams& params = kToyGroup);
};

struct Proof {
  uint64_t gamma = 0;
  uint64_t c = 0;
  uint64_t s = 0;

  bool operator==(const Proof&) const = default;
};

/// gamma || c || s, each LE64.
Bytes serialize_proof(const Proof& proof);
/// Throws std::invalid_argument unless exactly 24 bytes.
Proof deserialize_proof(ByteView bytes);

enum class KeyPolicy { Lax, Strict };

std::string_view to_string(KeyPolicy p);
KeyPolicy key_policy_from_string(std::string_view s);

enum class KeyCheck { Ok, Rejected };

/// Both policies reject x >= q and y != g^x. Strict additionally rejects x == 0.
KeyCheck validate_key(const Keypair& kp, KeyPolicy policy, const GroupParams& params = kToyGroup);

/// Public-key-only form used during selection: Strict rejects the identity.
KeyCheck validate_public_key(uint64_t y, KeyPolicy policy, const GroupParams& params = kToyGroup);

uint64_t hash_to_group(uint64_t pk, ByteView alpha, const GroupParams& params = kToyGroup);

struct ProveOutput {
  Digest beta;
  Proof proof;
};

/// Precondition: x < q.
ProveOutput vrf_prove(uint64_t x, ByteView alpha, const GroupParams& params = kToyGroup);

/// beta on success; nullopt on any range violation or challenge mismatch.
std::optional<Digest> vrf_verify(uint64_t y, ByteView alpha, const Proof& proof,
                                 const GroupParams& params = kToyGroup);

/// Beta of the identity gamma: the output every zero-key proof yields.
Digest degenerate_beta(const GroupParams& params = kToyGroup);

struct Candidate {
  std::string id;
  uint64_t y = 1;
  Digest beta;
  Proof proof;
};

/// LE64(round) || prev
Bytes round_alpha(uint64_t round, const Digest& prev);

class NoEligibleValidators : public std::runtime_error {
 public:
  NoEligibleValidators() : std::runtime_error("no eligible validators") {}
};

/// Drops candidates whose key fails `policy` or whose proof fails to verify
/// for round_alpha(round, prev), or whose claimed beta disagrees with the
/// verified one. Smallest beta (big-endian) wins; ties go to the smaller id.
std::string select_leader(const std::vector<Candidate>& candidates, uint64_t round, const Digest& prev,
                          KeyPolicy policy, const GroupParams& params = kToyGroup);

}  // namespace forkbench::vrf
