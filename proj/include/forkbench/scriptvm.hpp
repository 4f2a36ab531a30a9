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

// Stack-based contract VM.
//
// Every source of cross-node disagreement the VM can exhibit is a field of
// PlatformProfile: memcmp return convention, division rounding, contents of
// freshly grown memory, the linear-memory bounds check, and the page limit.
// Two runs with equal (script, context, profile, gas) are byte-identical.
//
// The bytecode encoding is documented in docs/bytecode.md.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forkbench/bytes.hpp"
#include "forkbench/mitigation.hpp"
#include "forkbench/state.hpp"
#include "forkbench/transaction.hpp"

namespace forkbench {

inline constexpr size_t kPageSize = 256;
inline constexpr uint32_t kDefaultMaxPages = 16;

enum class MemcmpMode { Raw, Normalized };
enum class BigDivMode { TruncTowardZero, Floor };
enum class UninitMode { Zeroed, HostRandom };
enum class BoundsMode { VulnerableSigned, HardenedUnsigned };

struct PlatformProfile {
  MemcmpMode memcmp_mode = MemcmpMode::Normalized;
  BigDivMode bigdiv_mode = BigDivMode::TruncTowardZero;
  UninitMode uninit_mode = UninitMode::Zeroed;
  // Only read when uninit_mode == HostRandom.
  uint64_t uninit_seed = 0;
  BoundsMode bounds_mode = BoundsMode::HardenedUnsigned;
  uint64_t oob_seed = 0;
  uint32_t max_pages = kDefaultMaxPages;

  bool operator==(const PlatformProfile&) const = default;
};

std::string_view to_string(MemcmpMode m);
std::string_view to_string(BigDivMode m);
std::string_view to_string(UninitMode m);
std::string_view to_string(BoundsMode m);
MemcmpMode memcmp_mode_from_string(std::string_view s);
BigDivMode bigdiv_mode_from_string(std::string_view s);
UninitMode uninit_mode_from_string(std::string_view s);
BoundsMode bounds_mode_from_string(std::string_view s);

enum class Op : uint8_t {
  PushBytes = 0x01,   // LE32 len, len bytes
  PushInt = 0x02,     // LE64 two's complement
  Dup = 0x03,
  Drop = 0x04,
  Swap = 0x05,
  Eq = 0x06,
  Jz = 0x07,          // LE32 byte offset
  Jmp = 0x08,         // LE32 byte offset
  GetWitnessScript = 0x09,
  Transfer = 0x0a,    // LE32 len, token id
  GrowMemory = 0x0b,
  MemLoad = 0x0c,     // u8 width in {1,2,4,8}
  MemStore = 0x0d,    // u8 width in {1,2,4,8}
  Memcmp = 0x0e,
  BigDiv = 0x0f,
  Halt = 0x10,
  Abort = 0x11,
};

std::string_view mnemonic(Op op);
std::optional<Op> op_from_mnemonic(std::string_view name);

struct Instruction {
  Op op = Op::Halt;
  uint32_t offset = 0;
  // PushInt value, jump target, or memory access width.
  int64_t imm = 0;
  // PushBytes payload or Transfer token id.
  Bytes data;

  bool operator==(const Instruction&) const = default;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DecodeError on unknown tags, truncated operands, bad widths, or
/// jump targets that do not land on an instruction boundary.
std::vector<Instruction> decode(ByteView script);

Bytes encode(const std::vector<Instruction>& program);

enum class AbortReason {
  DecodeError,
  StackUnderflow,
  GasExhausted,
  OutOfMemoryPages,
  MemoryTrap,
  InsufficientBalance,
  ExplicitAbort,
  // Operand of the wrong type or out of range (negative amount, etc).
  BadOperand,
};

std::string_view to_string(AbortReason r);

/// A token movement performed by TRANSFER.
struct Credit {
  std::string token;
  std::string from;
  std::string to;
  uint64_t amount = 0;

  bool operator==(const Credit&) const = default;
};

struct ExecContext {
  const Transaction& tx;
  std::string contract_account;
  // Read-only; effects go to the outcome's WriteLog.
  const LedgerState& state_view;
};

struct ExecOutcome {
  // Empty when halted.
  std::optional<AbortReason> abort;
  // Both empty when aborted.
  WriteLog log;
  std::vector<Credit> credits;
  uint64_t steps_used = 0;

  bool halted() const { return !abort.has_value(); }
  bool operator==(const ExecOutcome&) const = default;
};

ExecOutcome execute_script(ByteView script, const ExecContext& ctx, const PlatformProfile& profile,
                           uint64_t gas_limit);

// --- Individual operations, exposed for direct testing. ---

/// Extends `memory` by `pages` pages. Returns the new extent in bytes, or
/// nullopt (memory untouched) when the total would exceed profile.max_pages.
/// Zeroed fills with 0x00; HostRandom fills from a generator keyed by
/// (uninit_seed, current extent).
std::optional<size_t> op_grow_memory(uint64_t pages, const PlatformProfile& profile, Bytes& memory);

enum class BoundsClass { InBounds, OutOfBoundsRead, Trap };

std::string_view to_string(BoundsClass c);

/// VulnerableSigned admits any access whose signed end (addr + width) lies
/// in (0, mem_size], so -width < addr < 0 reaches below the memory base.
/// HardenedUnsigned admits exactly 0 <= addr <= mem_size - width.
BoundsClass op_bounds_check(int32_t addr, uint32_t width, size_t mem_size, BoundsMode mode);

/// The byte a VulnerableSigned load observes at negative address `addr`.
uint8_t host_residue_byte(uint64_t oob_seed, int64_t addr);

/// Shorter input is zero-padded. Raw returns the difference of the first
/// unequal byte pair; Normalized returns its sign.
int64_t op_memcmp(ByteView a, ByteView b, MemcmpMode mode);

/// nullopt when b == 0 or the quotient overflows (INT64_MIN / -1).
std::optional<int64_t> op_bigdiv(int64_t a, int64_t b, BigDivMode mode);

}  // namespace forkbench
