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

#include "incore/asm.h"

#include <gtest/gtest.h>

#include "incore/errors.h"
#include "test_util.h"

namespace incore {
namespace {

using testing::Listing;

KernelIR A64(std::initializer_list<std::string> lines) {
  return ParseListing(Listing(lines), Dialect::kAArch64);
}
KernelIR X86(std::initializer_list<std::string> lines) {
  return ParseListing(Listing(lines), Dialect::kX86Att);
}

MarkerProblem MarkerFailure(std::string_view text) {
  try {
    ExtractMarkedRegion(text);
  } catch (const MarkerError& e) {
    return e.problem();
  }
  ADD_FAILURE() << "no MarkerError";
  return MarkerProblem::kEmptyRegion;
}

TEST(ExtractMarkedRegion, KeepsOnlyInstructionLines) {
  std::string text = "\t.text\n# LOOP-BEGIN\n";
  for (int i = 0; i < 12; ++i) text += "\tadd x" + std::to_string(i) + ", x1, #1\n";
  text += "\n   # a comment\n// another\n# LOOP-END\n\tret\n";
  auto lines = ExtractMarkedRegion(text);
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines.front().number, 3);
}

TEST(ExtractMarkedRegion, SlashCommentLeader) {
  auto lines = ExtractMarkedRegion("// LOOP-BEGIN\nadd x0, x0, #1\n// LOOP-END\n");
  EXPECT_EQ(lines.size(), 1u);
}

TEST(ExtractMarkedRegion, MarkerErrors) {
  EXPECT_EQ(MarkerFailure("add x0, x0, #1\n"), MarkerProblem::kMissing);
  EXPECT_EQ(MarkerFailure("# LOOP-END\nadd x0, x0, #1\n# LOOP-BEGIN\n"), MarkerProblem::kMissing);
  EXPECT_EQ(MarkerFailure("# LOOP-BEGIN\n# LOOP-BEGIN\nnop\n# LOOP-END\n"),
            MarkerProblem::kMultiple);
  EXPECT_EQ(MarkerFailure("# LOOP-BEGIN\n# only a comment\n# LOOP-END\n"),
            MarkerProblem::kEmptyRegion);
}

TEST(ParseKernel, SveFma) {
  auto ir = A64({"fmla z0.d, p0/m, z1.d, z2.d"});
  ASSERT_EQ(ir.instructions.size(), 1u);
  const auto& in = ir.instructions[0];
  EXPECT_EQ(in.mnemonic, "fmla");
  ASSERT_EQ(in.operands.size(), 4u);
  EXPECT_EQ(FormKey(in), "fmla pred, vec128, vec128, vec128");
  const auto& dest = in.operands.back();
  EXPECT_EQ(dest.reg_class, RegClass::kVector);
  EXPECT_TRUE(dest.read);
  EXPECT_TRUE(dest.written);
}

TEST(ParseKernel, SveWidthFollowsOption) {
  ParseOptions wide;
  wide.sve_vector_bytes = 32;
  auto ir = ParseListing(Listing({"fadd z0.d, z1.d, z2.d"}), Dialect::kAArch64, wide);
  EXPECT_EQ(FormKey(ir.instructions[0]), "fadd vec256, vec256, vec256");
}

TEST(ParseKernel, X86ZmmOperands) {
  auto ir = X86({"vfmadd231pd %zmm0, %zmm1, %zmm2"});
  const auto& in = ir.instructions[0];
  ASSERT_EQ(in.operands.size(), 3u);
  for (const auto& o : in.operands) {
    EXPECT_EQ(o.reg_class, RegClass::kVector);
    EXPECT_EQ(o.width_bytes, 64);
  }
  // FMA accumulates into its destination.
  EXPECT_TRUE(in.operands[2].read);
  EXPECT_TRUE(in.operands[2].written);
}

TEST(ParseKernel, A64MemoryOperand) {
  auto ir = A64({"ldr x0, [x1, x2, lsl #3]"});
  const auto& in = ir.instructions[0];
  ASSERT_EQ(in.operands.size(), 2u);
  const auto& mem = in.operands[0];
  EXPECT_EQ(mem.kind, OperandKind::kMemory);
  EXPECT_EQ(mem.base, "x1");
  EXPECT_EQ(mem.index, "x2");
  EXPECT_EQ(mem.extend, "lsl #3");
  EXPECT_EQ(in.operands[1].reg, "x0");
  EXPECT_TRUE(in.operands[1].written);
  EXPECT_TRUE(in.ReadsMemory());
  EXPECT_FALSE(in.WritesMemory());
}

TEST(ParseKernel, A64WritebackForms) {
  auto pre = A64({"ldr q0, [x1, #16]!"}).instructions[0];
  EXPECT_TRUE(pre.operands[0].pre_index);
  auto post = A64({"ldr q0, [x1], #16"}).instructions[0];
  EXPECT_EQ(post.operands[0].post_index, "#16");
}

TEST(ParseKernel, X86MemoryOperand) {
  auto in = X86({"vaddpd 8(%rsi,%rax,8), %zmm0, %zmm1"}).instructions[0];
  const auto& mem = in.operands[0];
  EXPECT_EQ(mem.kind, OperandKind::kMemory);
  EXPECT_EQ(mem.base, "rsi");
  EXPECT_EQ(mem.index, "rax");
  EXPECT_EQ(mem.displacement, "8");
  EXPECT_EQ(mem.extend, "8");
  EXPECT_EQ(FormKey(in), "vaddpd mem, vec512, vec512");
}

TEST(ParseKernel, X86GatherHasVectorIndex) {
  auto in = X86({"vgatherdpd (%rax,%ymm1,8), %zmm0{%k1}"}).instructions[0];
  EXPECT_EQ(FormKey(in), "vgatherdpd vmem, pred, vec512");
  EXPECT_TRUE(in.operands[0].vector_index);
}

TEST(ParseKernel, FlagsAreImplicit) {
  auto ir = A64({"subs x0, x0, #1", "b.ne .L1"});
  ASSERT_EQ(ir.instructions.size(), 1u);
  EXPECT_EQ(ir.instructions[0].implicit_writes, std::vector<std::string>{"flags"});
  ASSERT_TRUE(ir.back_branch);
  EXPECT_EQ(ir.back_branch->mnemonic, "b.ne");
  EXPECT_EQ(ir.back_branch->target, ".L1");
  auto x = X86({"cmpq %rax, %rcx", "jne .L3"});
  EXPECT_EQ(x.instructions[0].implicit_writes, std::vector<std::string>{"flags"});
}

TEST(ParseKernel, SkipsLabelsAndDirectives) {
  auto ir = A64({".L3:", ".p2align 4", "add x0, x0, #1", "b.any .L3"});
  ASSERT_EQ(ir.instructions.size(), 1u);
}

TEST(ParseKernel, UnknownButWellFormedParses) {
  auto ir = A64({"frobnicate x0, x1"});
  EXPECT_EQ(ir.instructions[0].mnemonic, "frobnicate");
}

TEST(ParseKernel, SyntaxErrorHasLineAndColumn) {
  try {
    A64({"add x0, [x1, x2"});
    FAIL() << "no SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 0);
  }
}

TEST(Normalize, X86SubRegisterAliases) {
  auto ir = X86({"movl $0, %eax", "addq %rax, %rcx"});
  EXPECT_EQ(ir.instructions[0].operands.back().canonical, "rax");
  EXPECT_EQ(CanonicalRegister("eax", Dialect::kX86Att), "rax");
  EXPECT_EQ(CanonicalRegister("xmm3", Dialect::kX86Att), CanonicalRegister("zmm3", Dialect::kX86Att));
}

TEST(Normalize, A64SimdAndSveAlias) {
  EXPECT_EQ(CanonicalRegister("z0", Dialect::kAArch64), CanonicalRegister("v0", Dialect::kAArch64));
  EXPECT_EQ(CanonicalRegister("d0", Dialect::kAArch64), CanonicalRegister("q0", Dialect::kAArch64));
  EXPECT_EQ(CanonicalRegister("w3", Dialect::kAArch64), "x3");
}

TEST(Normalize, Idempotent) {
  for (const char* k : testing::kKernels) {
    for (auto [dir, dialect] : {std::pair{"aarch64", Dialect::kAArch64},
                                std::pair{"x86", Dialect::kX86Att}}) {
      auto ir = ParseListing(testing::ReadAll(testing::SourcePath(
                                 std::string("corpus/") + dir + "/" + k + ".s")),
                             dialect);
      EXPECT_EQ(Normalize(ir), ir) << dir << "/" << k;
    }
  }
}

TEST(PrettyPrint, RoundTripsCorpus) {
  for (const char* k : testing::kKernels) {
    for (auto [dir, dialect] : {std::pair{"aarch64", Dialect::kAArch64},
                                std::pair{"x86", Dialect::kX86Att}}) {
      auto ir = ParseListing(testing::ReadAll(testing::SourcePath(
                                 std::string("corpus/") + dir + "/" + k + ".s")),
                             dialect);
      ASSERT_FALSE(ir.instructions.empty());
      auto again = ParseListing("# LOOP-BEGIN\n" + PrettyPrint(ir) + "# LOOP-END\n", dialect);
      ASSERT_EQ(again.instructions.size(), ir.instructions.size()) << dir << "/" << k;
      for (std::size_t i = 0; i < ir.instructions.size(); ++i) {
        auto a = ir.instructions[i], b = again.instructions[i];
        a.source_line = b.source_line = 0;
        EXPECT_EQ(a, b) << dir << "/" << k << " #" << i;
      }
    }
  }
}

TEST(DumpIr, Stable) {
  auto text = testing::ReadAll(testing::SourcePath("corpus/x86/stream_triad.s"));
  auto a = DumpIr(ParseListing(text, Dialect::kX86Att));
  auto b = DumpIr(ParseListing(text, Dialect::kX86Att));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("[vfmadd213pd mem, vec512, vec512]"), std::string::npos);
}

}  // namespace
}  // namespace incore
