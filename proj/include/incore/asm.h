// Copyright 2026 The incore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Assembly frontend: pulls the marked loop body out of a listing and turns it
// into KernelIR for AArch64 (A64 + SVE subset) or x86-64 in AT&T syntax.
//
// Operands are kept in destination-last order for both dialects. AArch64
// writes destinations first, so the parser rotates them to the back and
// remembers how many it moved (`rotated`) so the listing can be printed again.

#ifndef INCORE_ASM_H_
#define INCORE_ASM_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace incore {

enum class Dialect { kAArch64, kX86Att };

std::string_view DialectName(Dialect d);
std::optional<Dialect> ParseDialect(std::string_view name);

enum class OperandKind { kRegister, kImmediate, kMemory, kPredicate, kLabel };

enum class RegClass { kNone, kScalarInt, kScalarFp, kVector, kPredicate };

struct Operand {
  OperandKind kind = OperandKind::kRegister;
  RegClass reg_class = RegClass::kNone;
  int width_bytes = 0;

  // Register and predicate operands. `reg` is the name as written (lower
  // case, no '%', no arrangement); `canonical` is the architectural register
  // it aliases once the kernel has been normalized.
  std::string reg;
  std::string canonical;
  std::string suffix;  // ".d", ".2d", "/m", ...

  // Immediates and labels keep their text without the '#'/'$' leader.
  std::string text;

  // Memory operands.
  std::string base;
  std::string index;
  std::string canonical_base;
  std::string canonical_index;
  std::string displacement;
  std::string extend;         // "lsl #3", "sxtw #3", "8" (x86 scale), "mul vl"
  std::string broadcast;      // x86 "{1to8}"
  bool vector_index = false;  // gather/scatter addressing
  bool pre_index = false;     // AArch64 "[x1, #8]!"
  std::string post_index;     // AArch64 "[x1], #8" -> "#8"

  // x86 EVEX write mask attached to the destination ("{%k1}", "{z}").
  bool mask_decorator = false;
  bool zeroing = false;

  bool read = false;
  bool written = false;

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct InstructionInstance {
  std::string mnemonic;
  std::vector<Operand> operands;  // destination-last
  int source_line = 0;
  int rotated = 0;
  std::vector<std::string> implicit_reads;   // e.g. "flags"
  std::vector<std::string> implicit_writes;

  bool ReadsMemory() const;
  bool WritesMemory() const;
  friend bool operator==(const InstructionInstance&,
                         const InstructionInstance&) = default;
};

// Operand class token used for instruction-form matching: gpr8..gpr64,
// fp16/fp32/fp64, vec128/vec256/vec512, pred, mem, vmem, imm, label.
std::string OperandClass(const Operand& op);

// "fmla pred, vec128, vec128, vec128"
std::string FormKey(const InstructionInstance& instr);

struct LoopBranch {
  std::string mnemonic;
  std::string target;
  int source_line = 0;
  friend bool operator==(const LoopBranch&, const LoopBranch&) = default;
};

struct KernelIR {
  std::vector<InstructionInstance> instructions;
  Dialect dialect = Dialect::kAArch64;
  std::optional<LoopBranch> back_branch;
  friend bool operator==(const KernelIR&, const KernelIR&) = default;
};

struct SourceLine {
  int number = 0;  // 1-based line in the listing
  std::string text;
};

// Lines strictly between "# LOOP-BEGIN" and "# LOOP-END" ("//" also accepted
// as the comment leader), without blank and comment-only lines.
std::vector<SourceLine> ExtractMarkedRegion(std::string_view listing);

struct ParseOptions {
  // SVE register width assumed for z registers. 16 bytes on Neoverse V2.
  int sve_vector_bytes = 16;
};

KernelIR ParseKernel(std::span<const SourceLine> lines, Dialect dialect,
                     const ParseOptions& options = {});

// Architectural identity of a register name ("w3" -> "x3", "eax" -> "rax").
std::string CanonicalRegister(std::string_view reg, Dialect dialect);

// Rewrites register aliases to their architectural identity (eax -> rax,
// w3 -> x3, q0/d0/z0 -> v0). Idempotent.
KernelIR Normalize(KernelIR ir);

// ExtractMarkedRegion + ParseKernel + Normalize.
KernelIR ParseListing(std::string_view listing, Dialect dialect,
                      const ParseOptions& options = {});

// Re-emits the kernel in its source dialect, one instruction per line.
std::string PrettyPrint(const KernelIR& ir);

// Stable textual IR used by `--dump-ir`.
std::string DumpIr(const KernelIR& ir);

}  // namespace incore

#endif  // INCORE_ASM_H_
