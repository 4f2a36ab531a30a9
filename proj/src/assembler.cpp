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

#include "forkbench/assembler.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "forkbench/scriptvm.hpp"

namespace forkbench {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment, ignoring comment characters inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (!quoted && (c == ';' || c == '#')) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-') return false;
  }
  return true;
}

Bytes parse_string_literal(std::string_view tok, size_t line) {
  if (tok.size() < 2 || tok.front() != '"' || tok.back() != '"') {
    throw AssemblyError(line, "malformed string literal: " + std::string(tok));
  }
  std::string_view body = tok.substr(1, tok.size() - 2);
  Bytes out;
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\') {
      out.push_back(static_cast<uint8_t>(c));
      continue;
    }
    if (++i >= body.size()) throw AssemblyError(line, "dangling escape");
    switch (body[i]) {
      case '\\': out.push_back('\\'); break;
      case '"': out.push_back('"'); break;
      case 'n': out.push_back('\n'); break;
      case 'x': {
        if (i + 2 >= body.size()) {
          throw AssemblyError(line, "truncated \\x escape");
        }
        try {
          Bytes b = from_hex(body.substr(i + 1, 2));
          out.push_back(b.at(0));
        } catch (const std::exception&) {
          throw AssemblyError(line, "bad \\x escape");
        }
        i += 2;
        break;
      }
      default:
        throw AssemblyError(line, std::string("unknown escape \\") + body[i]);
    }
  }
  return out;
}

Bytes parse_bytes_operand(std::string_view tok, size_t line) {
  if (!tok.empty() && tok.front() == '"') return parse_string_literal(tok, line);
  if (tok.starts_with("0x") || tok.starts_with("0X")) {
    try {
      return from_hex(tok.substr(2));
    } catch (const std::exception& e) {
      throw AssemblyError(line, std::string("bad hex literal: ") + e.what());
    }
  }
  throw AssemblyError(line, "expected string or hex literal, got: " + std::string(tok));
}

int64_t parse_int(std::string_view tok, size_t line) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw AssemblyError(line, "bad integer: " + std::string(tok));
  }
  return v;
}

struct PendingJump {
  size_t index;
  std::string label;
  size_t line;
};

}  // namespace

Bytes assemble(std::string_view source) {
  std::vector<Instruction> program;
  std::map<std::string, uint32_t, std::less<>> labels;
  std::vector<PendingJump> pending;
  uint32_t offset = 0;

  size_t line_no = 0;
  size_t start = 0;
  while (start <= source.size()) {
    size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = trim(strip_comment(source.substr(start, end - start)));
    start = end + 1;
    ++line_no;

    // Leading labels, possibly several.
    while (true) {
      size_t colon = line.find(':');
      if (colon == std::string_view::npos || line.find('"') < colon) break;
      std::string_view label = trim(line.substr(0, colon));
      if (!is_identifier(label)) break;
      if (!labels.emplace(std::string(label), offset).second) {
        throw AssemblyError(line_no, "duplicate label: " + std::string(label));
      }
      line = trim(line.substr(colon + 1));
    }
    if (line.empty()) continue;

    size_t space = line.find_first_of(" \t");
    std::string_view name = line.substr(0, space);
    std::string_view operand = space == std::string_view::npos ? "" : trim(line.substr(space));

    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    auto op = op_from_mnemonic(upper);
    if (!op) throw AssemblyError(line_no, "unknown mnemonic: " + std::string(name));

    Instruction ins;
    ins.op = *op;
    ins.offset = offset;
    auto require_operand = [&] {
      if (operand.empty()) throw AssemblyError(line_no, std::string(name) + " needs an operand");
    };
    auto forbid_operand = [&] {
      if (!operand.empty()) throw AssemblyError(line_no, std::string(name) + " takes no operand");
    };

    switch (*op) {
      case Op::PushBytes:
        require_operand();
        ins.data = parse_bytes_operand(operand, line_no);
        break;
      case Op::Transfer:
        require_operand();
        ins.data = operand.front() == '"' || operand.starts_with("0x")
                       ? parse_bytes_operand(operand, line_no)
                       : to_bytes(operand);
        break;
      case Op::PushInt:
        require_operand();
        ins.imm = parse_int(operand, line_no);
        break;
      case Op::Jz:
      case Op::Jmp:
        require_operand();
        if (is_identifier(operand)) {
          pending.push_back({program.size(), std::string(operand), line_no});
        } else {
          ins.imm = parse_int(operand, line_no);
        }
        break;
      case Op::MemLoad:
      case Op::MemStore: {
        require_operand();
        ins.imm = parse_int(operand, line_no);
        if (ins.imm != 1 && ins.imm != 2 && ins.imm != 4 && ins.imm != 8) {
          throw AssemblyError(line_no, "memory width must be 1, 2, 4 or 8");
        }
        break;
      }
      default:
        forbid_operand();
        break;
    }
    offset += static_cast<uint32_t>(encode({ins}).size());
    program.push_back(std::move(ins));
  }

  for (const PendingJump& j : pending) {
    auto it = labels.find(j.label);
    if (it == labels.end()) throw AssemblyError(j.line, "undefined label: " + j.label);
    program[j.index].imm = it->second;
  }

  Bytes out = encode(program);
  try {
    decode(out);
  } catch (const DecodeError& e) {
    throw AssemblyError(line_no, e.what());
  }
  return out;
}

namespace {

std::string render_bytes(const Bytes& data) {
  bool printable = true;
  for (uint8_t b : data) {
    if (b < 0x20 || b > 0x7e || b == '"' || b == '\\' || b == ';' || b == '#') printable = false;
  }
  if (printable) return "\"" + to_string(data) + "\"";
  return "0x" + to_hex(data);
}

}  // namespace

std::string disassemble(ByteView script) {
  std::vector<Instruction> program = decode(script);
  std::set<int64_t> targets;
  for (const Instruction& ins : program) {
    if (ins.op == Op::Jz || ins.op == Op::Jmp) targets.insert(ins.imm);
  }

  std::ostringstream out;
  for (const Instruction& ins : program) {
    if (targets.count(ins.offset)) out << 'L' << ins.offset << ":\n";
    out << "  " << mnemonic(ins.op);
    switch (ins.op) {
      case Op::PushBytes:
        out << ' ' << render_bytes(ins.data);
        break;
      case Op::Transfer:
        out << ' ' << render_bytes(ins.data);
        break;
      case Op::PushInt:
      case Op::MemLoad:
      case Op::MemStore:
        out << ' ' << ins.imm;
        break;
      case Op::Jz:
      case Op::Jmp:
        out << " L" << ins.imm;
        break;
      default:
        break;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace forkbench
