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

// Text form of the bytecode: one mnemonic per line, optional `label:`
// prefix, `;` or `#` starts a comment.
//
//   PUSH_BYTES "A"        string literal, escapes \" \\ \n \xNN
//   PUSH_BYTES 0x0110     hex literal (0x alone is the empty string)
//   PUSH_INT -7
//   JZ pay_b              label or numeric byte offset
//   TRANSFER TOK          bare word or string literal
//   MEM_LOAD 4

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "forkbench/bytes.hpp"

namespace forkbench {

class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

Bytes assemble(std::string_view source);

/// Throws DecodeError if `script` does not decode. Jump targets are rendered
/// as labels `L<offset>`.
std::string disassemble(ByteView script);

}  // namespace forkbench
