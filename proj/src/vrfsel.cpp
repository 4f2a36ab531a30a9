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

#include "forkbench/vrfsel.hpp"

namespace forkbench::vrf {

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod) {
  // Toy moduli are far below 2^32, so products fit in 64 bits.
  uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

bool valid_params(const GroupParams& params) {
  return params.q != 0 && (params.p - 1) % params.q == 0 && params.g % params.p != 1 &&
         mod_pow(params.g, params.q, params.p) == 1;
}

bool in_subgroup(uint64_t element, const GroupParams& params) {
  return element >= 1 && element < params.p && mod_pow(element, params.q, params.p) == 1;
}

Bytes encode(std::initializer_list<uint64_t> values) {
  Bytes out;
  for (uint64_t v : values) put_le64(out, v);
  return out;
}

uint64_t digest_mod(const Digest& d, uint64_t m) {
  uint64_t r = 0;
  for (uint8_t b : d.bytes) r = (r * 256 + b) % m;
  return r;
}

Keypair Keypair::from_secret(uint64_t x, const GroupParams& params) {
  return Keypair{x, mod_pow(params.g, x, params.p)};
}

Bytes serialize_proof(const Proof& proof) { return encode({proof.gamma, proof.c, proof.s}); }

Proof deserialize_proof(ByteView bytes) {
  if (bytes.size() != 24) throw std::invalid_argument("proof must be 24 bytes");
  return Proof{get_le64(bytes.subspan(0, 8)), get_le64(bytes.subspan(8, 8)),
               get_le64(bytes.subspan(16, 8))};
}

std::string_view to_string(KeyPolicy p) { return p == KeyPolicy::Lax ? "Lax" : "Strict"; }

KeyPolicy key_policy_from_string(std::string_view s) {
  if (s == "Lax") return KeyPolicy::Lax;
  if (s == "Strict") return KeyPolicy::Strict;
  throw std::invalid_argument("unknown key policy: " + std::string(s));
}

KeyCheck validate_key(const Keypair& kp, KeyPolicy policy, const GroupParams& params) {
  if (kp.x >= params.q || kp.y != mod_pow(params.g, kp.x, params.p)) return KeyCheck::Rejected;
  if (policy == KeyPolicy::Strict && kp.x == 0) return KeyCheck::Rejected;
  return KeyCheck::Ok;
}

KeyCheck validate_public_key(uint64_t y, KeyPolicy policy, const GroupParams& params) {
  if (!in_subgroup(y, params)) return KeyCheck::Rejected;
  if (policy == KeyPolicy::Strict && y == 1) return KeyCheck::Rejected;
  return KeyCheck::Ok;
}

uint64_t hash_to_group(uint64_t pk, ByteView alpha, const GroupParams& params) {
  Bytes input = encode({pk});
  append(input, alpha);
  uint64_t h = 0;
  for (unsigned counter = 0;; ++counter) {
    const uint64_t r = digest_mod(hash256(input), params.p);
    h = r * r % params.p;
    if (h != 0 && h != 1) return h;
    // Re-hash with a counter byte: first retry appends 0x00, then 0x01, ...
    if (counter == 0) {
      input.push_back(0);
    } else {
      input.back() = static_cast<uint8_t>(counter);
    }
  }
}

namespace {

uint64_t challenge(const GroupParams& params, uint64_t h, uint64_t y, uint64_t gamma, uint64_t u,
                   uint64_t v) {
  return digest_mod(hash256(encode({params.g, h, y, gamma, u, v})), params.q);
}

}  // namespace

ProveOutput vrf_prove(uint64_t x, ByteView alpha, const GroupParams& params) {
  const uint64_t y = mod_pow(params.g, x, params.p);
  const uint64_t h = hash_to_group(y, alpha, params);
  const uint64_t gamma = mod_pow(h, x, params.p);

  Bytes nonce_input = encode({x});
  append(nonce_input, alpha);
  const uint64_t k = digest_mod(hash256(nonce_input), params.q);

  const uint64_t c = challenge(params, h, y, gamma, mod_pow(params.g, k, params.p),
                               mod_pow(h, k, params.p));
  const uint64_t s = (k + params.q - (c * x) % params.q) % params.q;
  return ProveOutput{hash256(encode({gamma})), Proof{gamma, c, s}};
}

std::optional<Digest> vrf_verify(uint64_t y, ByteView alpha, const Proof& proof,
                                 const GroupParams& params) {
  if (!in_subgroup(y, params) || !in_subgroup(proof.gamma, params)) return std::nullopt;
  if (proof.c >= params.q || proof.s >= params.q) return std::nullopt;

  const uint64_t h = hash_to_group(y, alpha, params);
  const uint64_t u = mod_pow(y, proof.c, params.p) * mod_pow(params.g, proof.s, params.p) % params.p;
  const uint64_t v = mod_pow(proof.gamma, proof.c, params.p) * mod_pow(h, proof.s, params.p) % params.p;
  if (challenge(params, h, y, proof.gamma, u, v) != proof.c) return std::nullopt;
  return hash256(encode({proof.gamma}));
}

Digest degenerate_beta(const GroupParams&) { return hash256(encode({1})); }

Bytes round_alpha(uint64_t round, const Digest& prev) {
  Bytes alpha = encode({round});
  append(alpha, prev.view());
  return alpha;
}

std::string select_leader(const std::vector<Candidate>& candidates, uint64_t round, const Digest& prev,
                          KeyPolicy policy, const GroupParams& params) {
  const Bytes alpha = round_alpha(round, prev);
  const Candidate* best = nullptr;
  for (const Candidate& cand : candidates) {
    if (validate_public_key(cand.y, policy, params) != KeyCheck::Ok) continue;
    auto beta = vrf_verify(cand.y, alpha, cand.proof, params);
    if (!beta || *beta != cand.beta) continue;
    // Digest comparison is lexicographic over bytes, i.e. big-endian order.
    if (!best || cand.beta < best->beta || (cand.beta == best->beta && cand.id < best->id)) {
      best = &cand;
    }
  }
  if (!best) throw NoEligibleValidators();
  return best->id;
}

}  // namespace forkbench::vrf
