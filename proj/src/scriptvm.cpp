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

#include "forkbench/scriptvm.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

namespace forkbench {

// --- enum names ---

std::string_view to_string(MemcmpMode m) { return m == MemcmpMode::Raw ? "Raw" : "Normalized"; }
std::string_view to_string(BigDivMode m) {
  return m == BigDivMode::TruncTowardZero ? "TruncTowardZero" : "Floor";
}
std::string_view to_string(UninitMode m) { return m == UninitMode::Zeroed ? "Zeroed" : "HostRandom"; }
std::string_view to_string(BoundsMode m) {
  return m == BoundsMode::VulnerableSigned ? "VulnerableSigned" : "HardenedUnsigned";
}

namespace {

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<E> values, std::string_view what) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown " + std::string(what) + ": " + std::string(s));
}

}  // namespace

MemcmpMode memcmp_mode_from_string(std::string_view s) {
  return parse_enum(s, {MemcmpMode::Raw, MemcmpMode::Normalized}, "memcmp mode");
}
BigDivMode bigdiv_mode_from_string(std::string_view s) {
  return parse_enum(s, {BigDivMode::TruncTowardZero, BigDivMode::Floor}, "bigdiv mode");
}
UninitMode uninit_mode_from_string(std::string_view s) {
  return parse_enum(s, {UninitMode::Zeroed, UninitMode::HostRandom}, "uninit mode");
}
BoundsMode bounds_mode_from_string(std::string_view s) {
  return parse_enum(s, {BoundsMode::VulnerableSigned, BoundsMode::HardenedUnsigned}, "bounds mode");
}

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::DecodeError: return "DecodeError";
    case AbortReason::StackUnderflow: return "StackUnderflow";
    case AbortReason::GasExhausted: return "GasExhausted";
    case AbortReason::OutOfMemoryPages: return "OutOfMemoryPages";
    case AbortReason::MemoryTrap: return "MemoryTrap";
    case AbortReason::InsufficientBalance: return "InsufficientBalance";
    case AbortReason::ExplicitAbort: return "ExplicitAbort";
    case AbortReason::BadOperand: return "BadOperand";
  }
  return "?";
}

std::string_view to_string(BoundsClass c) {
  switch (c) {
    case BoundsClass::InBounds: return "InBounds";
    case BoundsClass::OutOfBoundsRead: return "OutOfBoundsRead";
    case BoundsClass::Trap: return "Trap";
  }
  return "?";
}

// --- opcode table ---

namespace {

struct OpInfo {
  Op op;
  std::string_view name;
};

constexpr std::array kOps{
    OpInfo{Op::PushBytes, "PUSH_BYTES"},
    OpInfo{Op::PushInt, "PUSH_INT"},
    OpInfo{Op::Dup, "DUP"},
    OpInfo{Op::Drop, "DROP"},
    OpInfo{Op::Swap, "SWAP"},
    OpInfo{Op::Eq, "EQ"},
    OpInfo{Op::Jz, "JZ"},
    OpInfo{Op::Jmp, "JMP"},
    OpInfo{Op::GetWitnessScript, "GET_WITNESS_SCRIPT"},
    OpInfo{Op::Transfer, "TRANSFER"},
    OpInfo{Op::GrowMemory, "GROW_MEMORY"},
    OpInfo{Op::MemLoad, "MEM_LOAD"},
    OpInfo{Op::MemStore, "MEM_STORE"},
    OpInfo{Op::Memcmp, "MEMCMP"},
    OpInfo{Op::BigDiv, "BIGDIV"},
    OpInfo{Op::Halt, "HALT"},
    OpInfo{Op::Abort, "ABORT"},
};

bool valid_width(int64_t w) { return w == 1 || w == 2 || w == 4 || w == 8; }

}  // namespace

std::string_view mnemonic(Op op) {
  for (const auto& info : kOps) {
    if (info.op == op) return info.name;
  }
  return "?";
}

std::optional<Op> op_from_mnemonic(std::string_view name) {
  for (const auto& info : kOps) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

// --- decode / encode ---

std::vector<Instruction> decode(ByteView script) {
  std::vector<Instruction> program;
  size_t pos = 0;
  auto need = [&](size_t n, uint32_t at) {
    if (script.size() - pos < n) {
      throw DecodeError("truncated operand at offset " + std::to_string(at));
    }
  };

  while (pos < script.size()) {
    Instruction ins;
    ins.offset = static_cast<uint32_t>(pos);
    uint8_t tag = script[pos++];
    if (tag < static_cast<uint8_t>(Op::PushBytes) || tag > static_cast<uint8_t>(Op::Abort)) {
      throw DecodeError("unknown opcode 0x" + to_hex(ByteView(&tag, 1)) + " at offset " +
                        std::to_string(ins.offset));
    }
    ins.op = static_cast<Op>(tag);

    switch (ins.op) {
      case Op::PushBytes:
      case Op::Transfer: {
        need(4, ins.offset);
        uint32_t len = get_le32(script.subspan(pos, 4));
        pos += 4;
        need(len, ins.offset);
        ins.data.assign(script.begin() + pos, script.begin() + pos + len);
        pos += len;
        break;
      }
      case Op::PushInt:
        need(8, ins.offset);
        ins.imm = static_cast<int64_t>(get_le64(script.subspan(pos, 8)));
        pos += 8;
        break;
      case Op::Jz:
      case Op::Jmp:
        need(4, ins.offset);
        ins.imm = get_le32(script.subspan(pos, 4));
        pos += 4;
        break;
      case Op::MemLoad:
      case Op::MemStore:
        need(1, ins.offset);
        ins.imm = script[pos++];
        if (!valid_width(ins.imm)) {
          throw DecodeError("bad memory width " + std::to_string(ins.imm) + " at offset " +
                            std::to_string(ins.offset));
        }
        break;
      default:
        break;
    }
    program.push_back(std::move(ins));
  }

  for (const Instruction& ins : program) {
    if (ins.op != Op::Jz && ins.op != Op::Jmp) continue;
    bool lands = std::any_of(program.begin(), program.end(),
                             [&](const Instruction& t) { return t.offset == ins.imm; });
    if (!lands) {
      throw DecodeError("jump at offset " + std::to_string(ins.offset) + " targets " +
                        std::to_string(ins.imm) + ", not an instruction boundary");
    }
  }
  return program;
}

Bytes encode(const std::vector<Instruction>& program) {
  Bytes out;
  for (const Instruction& ins : program) {
    out.push_back(static_cast<uint8_t>(ins.op));
    switch (ins.op) {
      case Op::PushBytes:
      case Op::Transfer:
        put_le32(out, static_cast<uint32_t>(ins.data.size()));
        append(out, ins.data);
        break;
      case Op::PushInt:
        put_le64(out, static_cast<uint64_t>(ins.imm));
        break;
      case Op::Jz:
      case Op::Jmp:
        put_le32(out, static_cast<uint32_t>(ins.imm));
        break;
      case Op::MemLoad:
      case Op::MemStore:
        out.push_back(static_cast<uint8_t>(ins.imm));
        break;
      default:
        break;
    }
  }
  return out;
}

// --- primitive operations ---

std::optional<size_t> op_grow_memory(uint64_t pages, const PlatformProfile& profile, Bytes& memory) {
  const uint64_t current_pages = memory.size() / kPageSize;
  if (pages > profile.max_pages || current_pages + pages > profile.max_pages) return std::nullopt;

  const size_t extent = memory.size();
  const size_t added = static_cast<size_t>(pages) * kPageSize;
  if (profile.uninit_mode == UninitMode::Zeroed) {
    memory.resize(extent + added, 0x00);
    return memory.size();
  }

  // Host residue: whatever the allocator hands back. Keyed by the seed and the
  // extent so identical profiles see identical bytes.
  const uint64_t seed = profile.uninit_seed;
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(extent), static_cast<uint32_t>(uint64_t{extent} >> 32)};
  std::mt19937_64 gen(seq);
  memory.reserve(extent + added);
  while (memory.size() < extent + added) {
    uint64_t word = gen();
    for (int i = 0; i < 8 && memory.size() < extent + added; ++i) {
      memory.push_back(static_cast<uint8_t>(word >> (8 * i)));
    }
  }
  return memory.size();
}

BoundsClass op_bounds_check(int32_t addr, uint32_t width, size_t mem_size, BoundsMode mode) {
  const int64_t start = addr;
  const int64_t end = start + static_cast<int64_t>(width);
  const int64_t size = static_cast<int64_t>(mem_size);

  if (start >= 0 && end <= size) return BoundsClass::InBounds;
  if (mode == BoundsMode::HardenedUnsigned) return BoundsClass::Trap;
  // The signed check only compares the end against the size.
  if (end > 0 && end <= size) return BoundsClass::OutOfBoundsRead;
  return BoundsClass::Trap;
}

uint8_t host_residue_byte(uint64_t oob_seed, int64_t addr) {
  Bytes key;
  put_le64(key, oob_seed);
  put_le64(key, static_cast<uint64_t>(addr));
  return hash256(key).bytes[0];
}

int64_t op_memcmp(ByteView a, ByteView b, MemcmpMode mode) {
  const size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    const int ca = i < a.size() ? a[i] : 0;
    const int cb = i < b.size() ? b[i] : 0;
    if (ca == cb) continue;
    const int64_t diff = ca - cb;
    if (mode == MemcmpMode::Raw) return diff;
    return diff < 0 ? -1 : 1;
  }
  return 0;
}

std::optional<int64_t> op_bigdiv(int64_t a, int64_t b, BigDivMode mode) {
  if (b == 0) return std::nullopt;
  if (a == std::numeric_limits<int64_t>::min() && b == -1) return std::nullopt;
  int64_t q = a / b;  // C++ truncates toward zero
  if (mode == BigDivMode::Floor && (a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// --- interpreter ---

namespace {

using Value = std::variant<int64_t, Bytes>;

bool truthy(const Value& v) {
  if (const auto* i = std::get_if<int64_t>(&v)) return *i != 0;
  return !std::get<Bytes>(v).empty();
}

class Interpreter {
 public:
  Interpreter(const std::vector<Instruction>& program, const ExecContext& ctx,
              const PlatformProfile& profile, uint64_t gas_limit)
      : program_(program), ctx_(ctx), profile_(profile), gas_limit_(gas_limit) {
    for (size_t i = 0; i < program_.size(); ++i) index_of_[program_[i].offset] = i;
  }

  ExecOutcome run() {
    size_t pc = 0;
    while (pc < program_.size()) {
      if (steps_ == gas_limit_) return aborted(AbortReason::GasExhausted);
      ++steps_;
      const Instruction& ins = program_[pc];
      size_t next = pc + 1;
      std::optional<AbortReason> fault;

      switch (ins.op) {
        case Op::PushBytes:
          stack_.emplace_back(ins.data);
          break;
        case Op::PushInt:
          stack_.emplace_back(ins.imm);
          break;
        case Op::Dup:
          if (stack_.empty()) return aborted(AbortReason::StackUnderflow);
          stack_.push_back(stack_.back());
          break;
        case Op::Drop:
          if (stack_.empty()) return aborted(AbortReason::StackUnderflow);
          stack_.pop_back();
          break;
        case Op::Swap:
          if (stack_.size() < 2) return aborted(AbortReason::StackUnderflow);
          std::swap(stack_[stack_.size() - 1], stack_[stack_.size() - 2]);
          break;
        case Op::Eq: {
          if (stack_.size() < 2) return aborted(AbortReason::StackUnderflow);
          Value b = pop();
          Value a = pop();
          stack_.emplace_back(int64_t{a == b ? 1 : 0});
          break;
        }
        case Op::Jz: {
          if (stack_.empty()) return aborted(AbortReason::StackUnderflow);
          if (!truthy(pop())) next = index_of_.at(static_cast<uint32_t>(ins.imm));
          break;
        }
        case Op::Jmp:
          next = index_of_.at(static_cast<uint32_t>(ins.imm));
          break;
        case Op::GetWitnessScript:
          stack_.emplace_back(ctx_.tx.witness.verification_script);
          break;
        case Op::Transfer:
          fault = transfer(to_string(ins.data));
          break;
        case Op::GrowMemory:
          fault = grow_memory();
          break;
        case Op::MemLoad:
          fault = mem_load(static_cast<uint32_t>(ins.imm));
          break;
        case Op::MemStore:
          fault = mem_store(static_cast<uint32_t>(ins.imm));
          break;
        case Op::Memcmp: {
          if (stack_.size() < 2) return aborted(AbortReason::StackUnderflow);
          Value b = pop();
          Value a = pop();
          const auto* ba = std::get_if<Bytes>(&a);
          const auto* bb = std::get_if<Bytes>(&b);
          if (!ba || !bb) return aborted(AbortReason::BadOperand);
          stack_.emplace_back(op_memcmp(*ba, *bb, profile_.memcmp_mode));
          break;
        }
        case Op::BigDiv: {
          if (stack_.size() < 2) return aborted(AbortReason::StackUnderflow);
          Value b = pop();
          Value a = pop();
          const auto* ia = std::get_if<int64_t>(&a);
          const auto* ib = std::get_if<int64_t>(&b);
          if (!ia || !ib) return aborted(AbortReason::BadOperand);
          auto q = op_bigdiv(*ia, *ib, profile_.bigdiv_mode);
          if (!q) return aborted(AbortReason::ExplicitAbort);
          stack_.emplace_back(*q);
          break;
        }
        case Op::Halt:
          return halted();
        case Op::Abort:
          return aborted(AbortReason::ExplicitAbort);
      }
      if (fault) return aborted(*fault);
      pc = next;
    }
    return halted();
  }

 private:
  Value pop() {
    Value v = std::move(stack_.back());
    stack_.pop_back();
    return v;
  }

  std::optional<int64_t> pop_int() {
    Value v = pop();
    if (const auto* i = std::get_if<int64_t>(&v)) return *i;
    return std::nullopt;
  }

  uint64_t read_balance(const std::string& token, const std::string& account) const {
    auto it = overlay_.find(BalanceKey{token, account});
    if (it != overlay_.end()) return it->second;
    return ctx_.state_view.balance(token, account);
  }

  void write_balance(const std::string& token, const std::string& account, uint64_t amount) {
    overlay_[BalanceKey{token, account}] = amount;
    log_.append(WriteOp::put(token, to_bytes(account), le64(amount)));
  }

  // Stack: ... recipient amount
  std::optional<AbortReason> transfer(const std::string& token) {
    if (stack_.size() < 2) return AbortReason::StackUnderflow;
    auto amount = pop_int();
    Value recipient_v = pop();
    const auto* recipient = std::get_if<Bytes>(&recipient_v);
    if (!amount || *amount < 0 || !recipient) return AbortReason::BadOperand;

    const std::string& from = ctx_.contract_account;
    const std::string to = to_string(*recipient);
    const auto value = static_cast<uint64_t>(*amount);

    const uint64_t from_balance = read_balance(token, from);
    if (from_balance < value) return AbortReason::InsufficientBalance;
    write_balance(token, from, from_balance - value);
    const uint64_t to_balance = read_balance(token, to);
    if (to_balance > std::numeric_limits<uint64_t>::max() - value) return AbortReason::BadOperand;
    write_balance(token, to, to_balance + value);
    credits_.push_back(Credit{token, from, to, value});
    return std::nullopt;
  }

  // Stack: ... pages  ->  ... previous_page_count
  std::optional<AbortReason> grow_memory() {
    if (stack_.empty()) return AbortReason::StackUnderflow;
    auto pages = pop_int();
    if (!pages || *pages < 0) return AbortReason::BadOperand;
    const auto previous = static_cast<int64_t>(memory_.size() / kPageSize);
    if (!op_grow_memory(static_cast<uint64_t>(*pages), profile_, memory_)) {
      return AbortReason::OutOfMemoryPages;
    }
    stack_.emplace_back(previous);
    return std::nullopt;
  }

  static std::optional<int32_t> as_address(int64_t v) {
    if (v < std::numeric_limits<int32_t>::min() || v > std::numeric_limits<int32_t>::max()) {
      return std::nullopt;
    }
    return static_cast<int32_t>(v);
  }

  // Stack: ... addr  ->  ... value (little-endian, zero-extended)
  std::optional<AbortReason> mem_load(uint32_t width) {
    if (stack_.empty()) return AbortReason::StackUnderflow;
    auto raw = pop_int();
    if (!raw) return AbortReason::BadOperand;
    auto addr = as_address(*raw);
    if (!addr) return AbortReason::MemoryTrap;

    BoundsClass cls = op_bounds_check(*addr, width, memory_.size(), profile_.bounds_mode);
    if (cls == BoundsClass::Trap) return AbortReason::MemoryTrap;

    uint64_t value = 0;
    for (uint32_t i = 0; i < width; ++i) {
      const int64_t a = int64_t{*addr} + i;
      const uint8_t byte = a < 0 ? host_residue_byte(profile_.oob_seed, a)
                                 : memory_[static_cast<size_t>(a)];
      value |= uint64_t{byte} << (8 * i);
    }
    stack_.emplace_back(static_cast<int64_t>(value));
    return std::nullopt;
  }

  // Stack: ... addr value
  std::optional<AbortReason> mem_store(uint32_t width) {
    if (stack_.size() < 2) return AbortReason::StackUnderflow;
    auto value = pop_int();
    auto raw = pop_int();
    if (!value || !raw) return AbortReason::BadOperand;
    auto addr = as_address(*raw);
    // Stores below the base would corrupt host memory; that is not modeled.
    if (!addr || op_bounds_check(*addr, width, memory_.size(), profile_.bounds_mode) !=
                     BoundsClass::InBounds) {
      return AbortReason::MemoryTrap;
    }
    for (uint32_t i = 0; i < width; ++i) {
      memory_[static_cast<size_t>(*addr) + i] = static_cast<uint8_t>(uint64_t(*value) >> (8 * i));
    }
    return std::nullopt;
  }

  ExecOutcome halted() {
    ExecOutcome out;
    out.log = std::move(log_);
    out.credits = std::move(credits_);
    out.steps_used = steps_;
    return out;
  }

  ExecOutcome aborted(AbortReason reason) const {
    ExecOutcome out;
    out.abort = reason;
    out.steps_used = steps_;
    return out;
  }

  const std::vector<Instruction>& program_;
  const ExecContext& ctx_;
  const PlatformProfile& profile_;
  const uint64_t gas_limit_;

  std::unordered_map<uint32_t, size_t> index_of_;
  std::vector<Value> stack_;
  Bytes memory_;
  std::map<BalanceKey, uint64_t> overlay_;
  WriteLog log_;
  std::vector<Credit> credits_;
  uint64_t steps_ = 0;
};

}  // namespace

ExecOutcome execute_script(ByteView script, const ExecContext& ctx, const PlatformProfile& profile,
                           uint64_t gas_limit) {
  std::vector<Instruction> program;
  try {
    program = decode(script);
  } catch (const DecodeError&) {
    ExecOutcome out;
    out.abort = AbortReason::DecodeError;
    return out;
  }
  return Interpreter(program, ctx, profile, gas_limit).run();
}

}  // namespace forkbench
