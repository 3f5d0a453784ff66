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

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "incore/errors.h"

namespace incore {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool StartsWith(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

bool EndsWith(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

bool IsNumber(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$';
}

// Position of the first character of a trailing comment, or npos.
std::size_t CommentStart(std::string_view line, Dialect dialect) {
  if (auto p = line.find("//"); p != std::string_view::npos) return p;
  if (dialect == Dialect::kX86Att) return line.find('#');
  // AArch64: '#' introduces immediates, so only a leading '#' is a comment.
  auto t = Trim(line);
  if (!t.empty() && t.front() == '#') return line.find('#');
  return std::string_view::npos;
}

// Splits on commas that are not nested inside (), [] or {}.
std::vector<std::string> SplitOperands(std::string_view text, int line) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') {
      if (--depth < 0) {
        throw SyntaxError(line, static_cast<int>(i) + 1, "unbalanced bracket");
      }
    }
    if (c == ',' && depth == 0) {
      out.emplace_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) {
    throw SyntaxError(line, static_cast<int>(text.size()), "unbalanced bracket");
  }
  auto last = Trim(cur);
  if (!last.empty() || !out.empty()) out.emplace_back(last);
  for (const auto& o : out) {
    if (o.empty()) throw SyntaxError(line, 1, "empty operand");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Register tables.

struct RegInfo {
  RegClass cls = RegClass::kNone;
  int width = 0;
  std::string canonical;
};

std::optional<int> RegNumber(std::string_view s, int max) {
  if (!IsNumber(s) || s.size() > 2) return std::nullopt;
  int n = std::stoi(std::string(s));
  if (n > max) return std::nullopt;
  return n;
}

std::optional<RegInfo> AArch64Register(std::string_view name, int sve_bytes) {
  std::string n = Lower(name);
  if (n == "xzr" || n == "sp") return RegInfo{RegClass::kScalarInt, 8, n};
  if (n == "wzr") return RegInfo{RegClass::kScalarInt, 4, "xzr"};
  if (n == "wsp") return RegInfo{RegClass::kScalarInt, 4, "sp"};
  if (n.size() < 2) return std::nullopt;
  char k = n[0];
  std::string_view rest = std::string_view(n).substr(1);
  if (k == 'x' || k == 'w') {
    if (auto r = RegNumber(rest, 30)) {
      return RegInfo{RegClass::kScalarInt, k == 'x' ? 8 : 4,
                     "x" + std::to_string(*r)};
    }
    return std::nullopt;
  }
  if (k == 'p') {
    if (auto r = RegNumber(rest, 15)) {
      return RegInfo{RegClass::kPredicate, std::max(1, sve_bytes / 8),
                     "p" + std::to_string(*r)};
    }
    return std::nullopt;
  }
  int width = 0;
  RegClass cls = RegClass::kScalarFp;
  switch (k) {
    case 'b': width = 1; break;
    case 'h': width = 2; break;
    case 's': width = 4; break;
    case 'd': width = 8; break;
    case 'q': width = 16; cls = RegClass::kVector; break;
    case 'v': width = 16; cls = RegClass::kVector; break;
    case 'z': width = sve_bytes; cls = RegClass::kVector; break;
    default: return std::nullopt;
  }
  if (auto r = RegNumber(rest, 31)) {
    return RegInfo{cls, width, "v" + std::to_string(*r)};
  }
  return std::nullopt;
}

std::optional<RegInfo> X86Register(std::string_view name) {
  static const char* kLegacy[] = {"ax", "bx", "cx", "dx", "si", "di", "bp", "sp"};
  std::string n = Lower(name);
  if (n == "rip") return RegInfo{RegClass::kScalarInt, 8, "rip"};
  for (const char* base : kLegacy) {
    std::string b = base;
    std::string canon = "r" + b;
    if (n == "r" + b) return RegInfo{RegClass::kScalarInt, 8, canon};
    if (n == "e" + b) return RegInfo{RegClass::kScalarInt, 4, canon};
    if (n == b) return RegInfo{RegClass::kScalarInt, 2, canon};
    bool pointer_like = b[1] == 'i' || b[1] == 'p';
    if (pointer_like && n == b + "l") return RegInfo{RegClass::kScalarInt, 1, canon};
    if (!pointer_like && (n == std::string(1, b[0]) + "l" ||
                          n == std::string(1, b[0]) + "h")) {
      return RegInfo{RegClass::kScalarInt, 1, canon};
    }
  }
  if (n.size() >= 2 && n[0] == 'r' && std::isdigit(static_cast<unsigned char>(n[1]))) {
    std::size_t i = 1;
    while (i < n.size() && std::isdigit(static_cast<unsigned char>(n[i]))) ++i;
    auto num = RegNumber(std::string_view(n).substr(1, i - 1), 15);
    if (!num || *num < 8) return std::nullopt;
    std::string canon = "r" + std::to_string(*num);
    std::string_view sfx = std::string_view(n).substr(i);
    if (sfx.empty()) return RegInfo{RegClass::kScalarInt, 8, canon};
    if (sfx == "d") return RegInfo{RegClass::kScalarInt, 4, canon};
    if (sfx == "w") return RegInfo{RegClass::kScalarInt, 2, canon};
    if (sfx == "b") return RegInfo{RegClass::kScalarInt, 1, canon};
    return std::nullopt;
  }
  for (auto [prefix, width] : {std::pair<const char*, int>{"xmm", 16},
                               {"ymm", 32}, {"zmm", 64}}) {
    if (StartsWith(n, prefix)) {
      if (auto r = RegNumber(std::string_view(n).substr(3), 31)) {
        return RegInfo{RegClass::kVector, width, "zmm" + std::to_string(*r)};
      }
      return std::nullopt;
    }
  }
  if (n.size() == 2 && n[0] == 'k' && n[1] >= '0' && n[1] <= '7') {
    return RegInfo{RegClass::kPredicate, 8, n};
  }
  return std::nullopt;
}

std::string CanonicalFor(std::string_view reg, Dialect dialect) {
  if (reg.empty()) return {};
  auto info = dialect == Dialect::kAArch64 ? AArch64Register(reg, 16)
                                           : X86Register(reg);
  return info ? info->canonical : std::string(reg);
}

// ---------------------------------------------------------------------------
// Mnemonic semantics.

bool IsAArch64Branch(std::string_view m) {
  return m == "b" || StartsWith(m, "b.") || m == "bl" || m == "br" ||
         m == "ret" || m == "cbz" || m == "cbnz" || m == "tbz" || m == "tbnz";
}

bool IsX86Branch(std::string_view m) {
  return (m.size() >= 2 && m[0] == 'j') || m == "ret" || m == "call" ||
         m == "callq" || m == "retq" || m == "loop";
}

bool IsAArch64Store(std::string_view m) {
  return (StartsWith(m, "st") && !StartsWith(m, "sti")) ||
         StartsWith(m, "prf");
}

bool AArch64NoDest(std::string_view m) {
  static const std::set<std::string, std::less<>> kSet = {
      "cmp", "cmn", "tst", "fcmp", "fcmpe", "ccmp", "ccmn", "fccmp", "fccmpe",
      "ptest", "nop"};
  return kSet.count(m) > 0 || IsAArch64Store(m) || IsAArch64Branch(m);
}

bool AArch64DestIsRead(std::string_view m) {
  static const std::set<std::string, std::less<>> kSet = {
      "fmla", "fmls", "fnmla", "fnmls", "fmad", "fmsb", "fnmad", "fnmsb",
      "mla", "mls", "movk", "bfi", "bfxil", "ins", "incd", "incw", "inch",
      "incb", "decd", "decw", "dech", "decb", "sqincd", "uqincd", "sqdecd",
      "uqdecd", "fcmla", "sdot", "udot", "bsl", "bit", "bif", "fcadd"};
  return kSet.count(m) > 0;
}

bool AArch64WritesFlags(std::string_view m) {
  static const std::set<std::string, std::less<>> kSet = {
      "adds", "subs", "ands", "bics", "cmp", "cmn", "tst", "fcmp", "fcmpe",
      "ccmp", "ccmn", "fccmp", "fccmpe", "ptest", "whilelo", "whilelt",
      "whilele", "whilels", "whilege", "whilegt", "whilehi", "whilehs",
      "pfirst", "pnext", "brka", "brkb", "brkas", "brkbs", "ptrues", "adcs",
      "sbcs", "negs", "ngcs"};
  return kSet.count(m) > 0;
}

bool AArch64ReadsFlags(std::string_view m) {
  static const std::set<std::string, std::less<>> kSet = {
      "csel", "csinc", "csinv", "csneg", "cset", "csetm", "cinc", "cinv",
      "cneg", "adc", "adcs", "sbc", "sbcs", "ngc", "ngcs", "ccmp", "ccmn",
      "fccmp", "fccmpe", "fcsel"};
  return kSet.count(m) > 0 || StartsWith(m, "b.");
}

const std::set<std::string, std::less<>>& X86IntegerBases() {
  static const std::set<std::string, std::less<>> kSet = {
      "add", "sub", "mov", "cmp", "inc", "dec", "lea", "and", "or", "xor",
      "imul", "shl", "sal", "sar", "shr", "test", "neg", "not", "push", "pop",
      "adc", "sbb", "rol", "ror", "movs", "movz", "cvtsi2sd", "cvtsi2ss",
      "vcvtsi2sd", "vcvtsi2ss", "bt", "xchg"};
  return kSet;
}

// Drops the AT&T operand-size suffix from integer mnemonics ("addq" -> "add").
std::string NormalizeX86Mnemonic(std::string_view m, char* size_suffix) {
  *size_suffix = 0;
  const auto& bases = X86IntegerBases();
  if (bases.count(m)) return std::string(m);
  if (m.size() > 1) {
    char last = m.back();
    if (last == 'b' || last == 'w' || last == 'l' || last == 'q') {
      auto base = m.substr(0, m.size() - 1);
      if (bases.count(base)) {
        *size_suffix = last;
        return std::string(base);
      }
    }
  }
  return std::string(m);
}

bool X86NoDest(std::string_view m) {
  return m == "cmp" || m == "test" ||
         m == "ucomisd" || m == "vucomisd" || m == "comisd" || m == "vcomisd" ||
         m == "ucomiss" || m == "vucomiss" || m == "bt" || m == "push" ||
         StartsWith(m, "prefetch") || m == "nop" || IsX86Branch(m);
}

bool X86WritesFlags(std::string_view m) {
  static const std::set<std::string, std::less<>> kSet = {
      "add", "sub", "and", "or", "xor", "inc", "dec", "neg", "cmp", "test",
      "shl", "sal", "shr", "sar", "imul", "adc", "sbb", "rol", "ror", "bt",
      "ucomisd", "vucomisd", "comisd", "vcomisd", "ucomiss", "vucomiss"};
  return kSet.count(m) > 0;
}

bool X86ReadsFlags(std::string_view m) {
  return m == "adc" || m == "sbb" || StartsWith(m, "cmov") ||
         StartsWith(m, "set") || (m.size() >= 2 && m[0] == 'j' && m != "jmp");
}

bool X86IsMoveLike(std::string_view m) {
  return StartsWith(m, "mov") || StartsWith(m, "vmov") || m == "lea" ||
         StartsWith(m, "cvt") || StartsWith(m, "vcvt") ||
         StartsWith(m, "vbroadcast") || StartsWith(m, "vpbroadcast") ||
         StartsWith(m, "sqrt") || StartsWith(m, "vsqrt") || m == "pop";
}

bool X86IsFma(std::string_view m) {
  return StartsWith(m, "vfmadd") || StartsWith(m, "vfmsub") ||
         StartsWith(m, "vfnmadd") || StartsWith(m, "vfnmsub");
}

bool X86IsZeroIdiomMnemonic(std::string_view m) {
  static const std::set<std::string, std::less<>> kSet = {
      "xor", "sub", "pxor", "xorps", "xorpd", "vxorps", "vxorpd", "vpxor",
      "vpxord", "vpxorq", "vpsubq", "vpsubd", "psubq"};
  return kSet.count(m) > 0;
}

// x86 SSE/AVX scalar-FP instructions operate on the low element only.
bool X86IsScalarFp(std::string_view m) {
  if (StartsWith(m, "vbroadcast") || StartsWith(m, "vpbroadcast") ||
      StartsWith(m, "vgather") || StartsWith(m, "vscatter") ||
      StartsWith(m, "vpgather")) {
    return false;
  }
  if (StartsWith(m, "cvtsi2") || StartsWith(m, "vcvtsi2")) return true;
  return EndsWith(m, "sd") || EndsWith(m, "ss");
}

// ---------------------------------------------------------------------------
// Operand parsing.

class OperandParser {
 public:
  OperandParser(Dialect dialect, const ParseOptions& options, int line)
      : dialect_(dialect), options_(options), line_(line) {}

  Operand Register(std::string_view token) const {
    std::string_view name = token;
    std::string suffix;
    if (dialect_ == Dialect::kX86Att) {
      if (name.empty() || name.front() != '%') Fail(token, "expected register");
      name.remove_prefix(1);
      auto info = X86Register(name);
      if (!info) Fail(token, "unknown register");
      return MakeReg(*info, name, "");
    }
    auto cut = name.find_first_of("./[");
    if (cut != std::string_view::npos) {
      suffix = Lower(name.substr(cut));
      name = name.substr(0, cut);
    }
    auto info = AArch64Register(name, options_.sve_vector_bytes);
    if (!info) Fail(token, "unknown register");
    RegInfo ri = *info;
    if (name[0] == 'v' || name[0] == 'V') ri.width = NeonWidth(suffix, token);
    return MakeReg(ri, name, suffix);
  }

  bool LooksLikeRegister(std::string_view token) const {
    if (dialect_ == Dialect::kX86Att) {
      return !token.empty() && token.front() == '%';
    }
    auto name = token.substr(0, token.find_first_of("./["));
    return AArch64Register(name, options_.sve_vector_bytes).has_value();
  }

  Operand Immediate(std::string_view token) const {
    Operand op;
    op.kind = OperandKind::kImmediate;
    op.text = std::string(Trim(token.substr(1)));
    if (op.text.empty()) Fail(token, "empty immediate");
    op.read = true;
    return op;
  }

  Operand Label(std::string_view token) const {
    for (char c : token) {
      if (!IsIdentChar(c) && c != '+' && c != '-' && c != '@' && c != ':') {
        Fail(token, "malformed operand");
      }
    }
    Operand op;
    op.kind = OperandKind::kLabel;
    op.text = std::string(token);
    return op;
  }

  // "[x1]", "[x1, #16]!", "[x1, x2, lsl #3]", "[x0, z1.d, lsl #3]".
  Operand AArch64Memory(std::string_view token) const {
    Operand op;
    op.kind = OperandKind::kMemory;
    op.read = true;
    auto close = token.rfind(']');
    if (token.front() != '[' || close == std::string_view::npos) {
      Fail(token, "malformed memory operand");
    }
    auto tail = Trim(token.substr(close + 1));
    if (tail == "!") {
      op.pre_index = true;
    } else if (!tail.empty()) {
      Fail(token, "unexpected text after memory operand");
    }
    auto parts = SplitOperands(token.substr(1, close - 1), line_);
    if (parts.empty()) Fail(token, "empty address");
    Operand base = Register(parts[0]);
    if (base.reg_class == RegClass::kVector) op.vector_index = true;
    op.base = base.reg + base.suffix;
    op.canonical_base = base.canonical;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      std::string_view p = parts[i];
      if (p.front() == '#') {
        if (!op.displacement.empty() || !op.index.empty()) Fail(token, "unexpected offset");
        op.displacement = std::string(Trim(p.substr(1)));
      } else if (LooksLikeRegister(p)) {
        if (!op.index.empty()) Fail(token, "two index registers");
        Operand idx = Register(p);
        if (idx.reg_class == RegClass::kVector) op.vector_index = true;
        op.index = idx.reg + idx.suffix;
        op.canonical_index = idx.canonical;
      } else {
        if (!op.extend.empty()) Fail(token, "two extend specifiers");
        op.extend = Lower(p);
      }
    }
    return op;
  }

  // "disp(base,index,scale){1to8}".
  Operand X86Memory(std::string_view token) const {
    Operand op;
    op.kind = OperandKind::kMemory;
    op.read = true;
    std::string_view t = token;
    if (auto colon = t.find(':'); colon != std::string_view::npos &&
                                  t.front() == '%') {
      t = t.substr(colon + 1);  // segment override
    }
    if (auto brace = t.find('{'); brace != std::string_view::npos) {
      op.broadcast = Lower(t.substr(brace));
      t = t.substr(0, brace);
    }
    auto open = t.find('(');
    if (open == std::string_view::npos) {
      op.displacement = std::string(Trim(t));
      return op;
    }
    auto close = t.find(')', open);
    if (close == std::string_view::npos || !Trim(t.substr(close + 1)).empty()) {
      Fail(token, "malformed memory operand");
    }
    op.displacement = std::string(Trim(t.substr(0, open)));
    std::vector<std::string> parts;
    std::string cur;
    for (char c : t.substr(open + 1, close - open - 1)) {
      if (c == ',') {
        parts.emplace_back(Trim(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.emplace_back(Trim(cur));
    if (parts.size() > 3) Fail(token, "too many address components");
    if (!parts[0].empty()) {
      Operand base = Register(parts[0]);
      op.base = base.reg;
      op.canonical_base = base.canonical;
    }
    if (parts.size() >= 2 && !parts[1].empty()) {
      Operand idx = Register(parts[1]);
      if (idx.reg_class == RegClass::kVector) op.vector_index = true;
      op.index = idx.reg;
      op.canonical_index = idx.canonical;
    }
    if (parts.size() == 3) {
      if (parts[2] != "1" && parts[2] != "2" && parts[2] != "4" && parts[2] != "8") {
        Fail(token, "bad scale");
      }
      op.extend = parts[2];
    }
    if (op.base.empty() && op.index.empty()) Fail(token, "empty address");
    return op;
  }

  [[noreturn]] void Fail(std::string_view token, const std::string& what) const {
    throw SyntaxError(line_, column_, what + " '" + std::string(token) + "'");
  }

  void set_column(int c) { column_ = c; }

 private:
  static Operand MakeReg(const RegInfo& info, std::string_view name,
                         std::string suffix) {
    Operand op;
    op.kind = info.cls == RegClass::kPredicate ? OperandKind::kPredicate
                                               : OperandKind::kRegister;
    op.reg_class = info.cls;
    op.width_bytes = info.width;
    op.reg = Lower(name);
    op.canonical = op.reg;
    op.suffix = std::move(suffix);
    return op;
  }

  int NeonWidth(const std::string& suffix, std::string_view token) const {
    // v0.2d -> 16 B, v0.2s -> 8 B, v0.d[1] -> element.
    if (suffix.empty()) return 16;
    if (suffix.find('[') != std::string::npos) return 16;
    std::string arr = suffix.substr(1);
    std::size_t i = 0;
    while (i < arr.size() && std::isdigit(static_cast<unsigned char>(arr[i]))) ++i;
    if (i == 0 || i == arr.size()) return 16;
    int lanes = std::stoi(arr.substr(0, i));
    int bytes = 0;
    switch (arr[i]) {
      case 'b': bytes = 1; break;
      case 'h': bytes = 2; break;
      case 's': bytes = 4; break;
      case 'd': bytes = 8; break;
      default: Fail(token, "bad arrangement");
    }
    return lanes * bytes;
  }

  Dialect dialect_;
  const ParseOptions& options_;
  int line_;
  int column_ = 1;
};

bool IsShiftOrExtend(std::string_view token) {
  std::string t = Lower(token);
  for (const char* k : {"lsl", "lsr", "asr", "ror", "sxtw", "uxtw", "sxtx",
                        "uxtx", "sxtb", "uxtb", "sxth", "uxth", "mul vl"}) {
    if (StartsWith(t, k)) return true;
  }
  return false;
}

int WidestRegister(const std::vector<Operand>& ops) {
  int w = 0;
  for (const auto& o : ops) {
    if (o.kind == OperandKind::kRegister) w = std::max(w, o.width_bytes);
  }
  return w;
}

void ParseAArch64(InstructionInstance& instr, std::string_view operand_text,
                  const ParseOptions& options, int line) {
  OperandParser p(Dialect::kAArch64, options, line);
  auto tokens = SplitOperands(operand_text, line);
  const std::string& m = instr.mnemonic;
  std::vector<Operand> ops;
  int list_registers = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string_view tok = tokens[i];
    if (tok.front() == '{') {
      if (tok.back() != '}') p.Fail(tok, "unterminated register list");
      auto inner = SplitOperands(tok.substr(1, tok.size() - 2), line);
      for (const auto& r : inner) {
        Operand op = p.Register(r);
        op.extend = "{}";  // marks list membership for printing
        ops.push_back(std::move(op));
        if (i == 0) ++list_registers;
      }
    } else if (tok.front() == '[') {
      ops.push_back(p.AArch64Memory(tok));
    } else if (tok.front() == '#') {
      if (!ops.empty() && ops.back().kind == OperandKind::kMemory &&
          ops.back().post_index.empty() && !ops.back().pre_index) {
        ops.back().post_index = std::string(tok);
      } else {
        ops.push_back(p.Immediate(tok));
      }
    } else if (IsShiftOrExtend(tok)) {
      if (ops.empty()) p.Fail(tok, "dangling shift");
      if (!ops.back().extend.empty()) p.Fail(tok, "two shift specifiers");
      ops.back().extend = Lower(tok);
    } else if (p.LooksLikeRegister(tok)) {
      if (!ops.empty() && ops.back().kind == OperandKind::kMemory &&
          ops.back().post_index.empty() && !ops.back().pre_index &&
          IsAArch64Store(m) == false && m.substr(0, 2) == "ld") {
        ops.back().post_index = std::string(tok);
      } else {
        ops.push_back(p.Register(tok));
      }
    } else {
      ops.push_back(p.Label(tok));
    }
  }

  int dests = 0;
  if (!ops.empty() && !AArch64NoDest(m)) {
    if (list_registers > 0) {
      dests = list_registers;
    } else if (m == "ldp" || m == "ldnp" || m == "ldpsw") {
      dests = 2;
    } else if (ops[0].kind == OperandKind::kRegister ||
               ops[0].kind == OperandKind::kPredicate) {
      dests = 1;
    }
  }
  dests = std::min<int>(dests, static_cast<int>(ops.size()));
  bool merging = false;
  for (const auto& o : ops) {
    if (o.kind == OperandKind::kPredicate && o.suffix == "/m") merging = true;
  }
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
    Operand& o = ops[i];
    if (o.kind == OperandKind::kMemory) {
      o.read = !IsAArch64Store(m) || StartsWith(m, "prf");
      o.written = IsAArch64Store(m) && !StartsWith(m, "prf");
      continue;
    }
    if (o.kind != OperandKind::kRegister && o.kind != OperandKind::kPredicate) continue;
    if (i < dests) {
      o.written = true;
      o.read = AArch64DestIsRead(m) || (merging && o.kind == OperandKind::kRegister);
    } else {
      o.read = true;
    }
  }
  // Size the memory operand after the data registers.
  int data_width = 0;
  for (const auto& o : ops) {
    if (o.kind == OperandKind::kRegister) data_width += o.extend == "{}" ? o.width_bytes : 0;
  }
  for (auto& o : ops) {
    if (o.kind != OperandKind::kMemory) continue;
    int w = data_width;
    if (w == 0) {
      int regs = 0;
      for (const auto& r : ops) {
        if (r.kind == OperandKind::kRegister) {
          w += r.width_bytes;
          ++regs;
        }
      }
      if (m != "ldp" && m != "stp" && m != "ldnp" && m != "stnp" && regs > 0) {
        w = WidestRegister(ops);
      }
    }
    o.width_bytes = std::max(w, 1);
  }
  std::rotate(ops.begin(), ops.begin() + dests, ops.end());
  instr.rotated = dests;
  instr.operands = std::move(ops);
  if (AArch64WritesFlags(m)) instr.implicit_writes.push_back("flags");
  if (AArch64ReadsFlags(m)) instr.implicit_reads.push_back("flags");
}

void ParseX86(InstructionInstance& instr, std::string_view operand_text,
              const ParseOptions& options, int line, char size_suffix) {
  OperandParser p(Dialect::kX86Att, options, line);
  auto tokens = SplitOperands(operand_text, line);
  const std::string& m = instr.mnemonic;
  std::vector<Operand> ops;
  for (const auto& raw : tokens) {
    std::string_view tok = raw;
    if (tok.front() == '$') {
      ops.push_back(p.Immediate(tok));
    } else if (tok.front() == '%' && tok.find('(') == std::string_view::npos &&
               tok.find(':') == std::string_view::npos) {
      // Register, possibly with EVEX decorators: %zmm0{%k1}{z}.
      auto brace = tok.find('{');
      Operand reg = p.Register(tok.substr(0, brace));
      if (brace != std::string_view::npos) {
        std::string_view deco = tok.substr(brace);
        bool zeroing = false;
        std::optional<Operand> mask;
        while (!deco.empty()) {
          auto end = deco.find('}');
          if (deco.front() != '{' || end == std::string_view::npos) {
            p.Fail(tok, "malformed decorator");
          }
          auto inner = deco.substr(1, end - 1);
          if (inner == "z") {
            zeroing = true;
          } else {
            mask = p.Register(inner);
            if (mask->kind != OperandKind::kPredicate) p.Fail(tok, "mask must be %k");
          }
          deco = deco.substr(end + 1);
        }
        if (mask) {
          mask->mask_decorator = true;
          mask->zeroing = zeroing;
          ops.push_back(*mask);
        } else if (zeroing) {
          p.Fail(tok, "{z} without mask");
        }
      }
      ops.push_back(reg);
    } else if (tok.front() == '*') {
      ops.push_back(p.Label(tok.substr(1)));
    } else if (tok.find('(') != std::string_view::npos) {
      ops.push_back(p.X86Memory(tok));
    } else {
      ops.push_back(p.Label(tok));
    }
  }

  if (X86IsScalarFp(m)) {
    for (auto& o : ops) {
      if (o.kind == OperandKind::kRegister && o.reg_class == RegClass::kVector &&
          o.width_bytes == 16) {
        o.reg_class = RegClass::kScalarFp;
        o.width_bytes = EndsWith(m, "ss") ? 4 : 8;
      }
    }
  }

  const int n = static_cast<int>(ops.size());
  int dest = -1;
  if (n > 0 && !X86NoDest(m)) dest = n - 1;
  bool dest_read = false;
  if (dest >= 0) {
    bool masked_merge = false;
    for (const auto& o : ops) {
      if (o.mask_decorator && !o.zeroing) masked_merge = true;
    }
    int real_operands = 0;
    for (const auto& o : ops) real_operands += o.mask_decorator ? 0 : 1;
    bool legacy_two_operand = m[0] != 'v' && real_operands == 2 && !X86IsMoveLike(m);
    dest_read = legacy_two_operand || real_operands == 1 || X86IsFma(m) ||
                masked_merge || StartsWith(m, "vgather") || StartsWith(m, "vpgather");
    if (m == "pop") dest_read = false;
  }
  for (int i = 0; i < n; ++i) {
    Operand& o = ops[i];
    if (o.kind == OperandKind::kImmediate || o.kind == OperandKind::kLabel) continue;
    if (i == dest) {
      o.written = true;
      o.read = dest_read;
    } else {
      o.read = true;
    }
    if (o.kind == OperandKind::kMemory && i == dest) {
      o.read = dest_read;
    }
  }
  // Gathers clear their mask as elements complete.
  if (StartsWith(m, "vgather") || StartsWith(m, "vpgather")) {
    for (auto& o : ops) {
      if (o.mask_decorator || (o.kind == OperandKind::kRegister && &o == &ops.front() &&
                               n == 3)) {
        o.written = true;
      }
    }
  }
  // Zero idioms ("vxorpd %ymm0, %ymm0, %ymm0") break the dependency.
  if (dest >= 0 && X86IsZeroIdiomMnemonic(m) && ops[dest].kind == OperandKind::kRegister) {
    bool all_same = true;
    for (int i = 0; i < n; ++i) {
      if (ops[i].kind != OperandKind::kRegister ||
          ops[i].canonical != ops[dest].canonical) {
        all_same = false;
      }
    }
    if (all_same && n >= 2) {
      for (auto& o : ops) o.read = false;
    }
  }
  int width = WidestRegister(ops);
  if (width == 0) {
    switch (size_suffix) {
      case 'b': width = 1; break;
      case 'w': width = 2; break;
      case 'l': width = 4; break;
      default: width = 8;
    }
  }
  for (auto& o : ops) {
    if (o.kind == OperandKind::kMemory) o.width_bytes = width;
  }
  instr.operands = std::move(ops);
  instr.rotated = 0;
  if (X86WritesFlags(m)) instr.implicit_writes.push_back("flags");
  if (X86ReadsFlags(m)) instr.implicit_reads.push_back("flags");
}

// Strips labels and comments. Returns the instruction text (possibly empty).
std::string_view StripLine(std::string_view text, Dialect dialect) {
  if (auto c = CommentStart(text, dialect); c != std::string_view::npos) {
    text = text.substr(0, c);
  }
  text = Trim(text);
  // Leading "label:" (possibly several).
  while (true) {
    std::size_t i = 0;
    while (i < text.size() && IsIdentChar(text[i])) ++i;
    if (i > 0 && i < text.size() && text[i] == ':') {
      text = Trim(text.substr(i + 1));
    } else {
      break;
    }
  }
  return text;
}

std::string RenderAArch64Operand(const Operand& o) {
  switch (o.kind) {
    case OperandKind::kRegister:
    case OperandKind::kPredicate: {
      std::string s = o.reg + o.suffix;
      if (!o.extend.empty() && o.extend != "{}") s += ", " + o.extend;
      return s;
    }
    case OperandKind::kImmediate:
      return "#" + o.text;
    case OperandKind::kLabel:
      return o.text;
    case OperandKind::kMemory: {
      std::string s = "[" + o.base;
      if (!o.index.empty()) s += ", " + o.index;
      if (!o.displacement.empty()) s += ", #" + o.displacement;
      if (!o.extend.empty()) s += ", " + o.extend;
      s += "]";
      if (o.pre_index) s += "!";
      if (!o.post_index.empty()) s += ", " + o.post_index;
      return s;
    }
  }
  return {};
}

std::string RenderX86Operand(const Operand& o) {
  switch (o.kind) {
    case OperandKind::kRegister:
    case OperandKind::kPredicate:
      return "%" + o.reg;
    case OperandKind::kImmediate:
      return "$" + o.text;
    case OperandKind::kLabel:
      return o.text;
    case OperandKind::kMemory: {
      std::string s = o.displacement;
      if (!o.base.empty() || !o.index.empty()) {
        s += "(";
        if (!o.base.empty()) s += "%" + o.base;
        if (!o.index.empty()) s += ",%" + o.index;
        if (!o.extend.empty()) s += "," + o.extend;
        s += ")";
      }
      return s + o.broadcast;
    }
  }
  return {};
}

std::string_view KindName(OperandKind k) {
  switch (k) {
    case OperandKind::kRegister: return "reg";
    case OperandKind::kImmediate: return "imm";
    case OperandKind::kMemory: return "mem";
    case OperandKind::kPredicate: return "pred";
    case OperandKind::kLabel: return "label";
  }
  return "?";
}

}  // namespace

std::string_view DialectName(Dialect d) {
  return d == Dialect::kAArch64 ? "aarch64" : "x86-att";
}

std::optional<Dialect> ParseDialect(std::string_view name) {
  if (name == "aarch64") return Dialect::kAArch64;
  if (name == "x86-att" || name == "x86") return Dialect::kX86Att;
  return std::nullopt;
}

bool InstructionInstance::ReadsMemory() const {
  for (const auto& o : operands) {
    if (o.kind == OperandKind::kMemory && o.read) return true;
  }
  return false;
}

bool InstructionInstance::WritesMemory() const {
  for (const auto& o : operands) {
    if (o.kind == OperandKind::kMemory && o.written) return true;
  }
  return false;
}

std::string OperandClass(const Operand& op) {
  switch (op.kind) {
    case OperandKind::kImmediate: return "imm";
    case OperandKind::kLabel: return "label";
    case OperandKind::kMemory: return op.vector_index ? "vmem" : "mem";
    case OperandKind::kPredicate: return "pred";
    case OperandKind::kRegister: break;
  }
  switch (op.reg_class) {
    case RegClass::kScalarInt: return "gpr" + std::to_string(op.width_bytes * 8);
    case RegClass::kScalarFp: return "fp" + std::to_string(op.width_bytes * 8);
    case RegClass::kVector: return "vec" + std::to_string(op.width_bytes * 8);
    case RegClass::kPredicate: return "pred";
    case RegClass::kNone: break;
  }
  return "reg";
}

std::string FormKey(const InstructionInstance& instr) {
  std::string key = instr.mnemonic;
  for (std::size_t i = 0; i < instr.operands.size(); ++i) {
    key += i == 0 ? " " : ", ";
    key += OperandClass(instr.operands[i]);
  }
  return key;
}

std::vector<SourceLine> ExtractMarkedRegion(std::string_view listing) {
  std::vector<SourceLine> lines;
  int begin_line = 0;
  int end_line = 0;
  int begins = 0;
  int ends = 0;
  std::vector<SourceLine> all;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= listing.size()) {
    auto nl = listing.find('\n', pos);
    if (nl == std::string_view::npos) nl = listing.size();
    std::string_view line = listing.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    auto t = Trim(line);
    std::string_view body;
    if (StartsWith(t, "#")) body = Trim(t.substr(1));
    else if (StartsWith(t, "//")) body = Trim(t.substr(2));
    if (body == "LOOP-BEGIN") {
      ++begins;
      begin_line = number;
    } else if (body == "LOOP-END") {
      ++ends;
      end_line = number;
    }
    all.push_back({number, std::string(line)});
    pos = nl + 1;
  }
  if (begins > 1 || ends > 1) {
    throw MarkerError(MarkerProblem::kMultiple, "more than one LOOP-BEGIN/LOOP-END marker");
  }
  if (begins == 0 || ends == 0 || end_line < begin_line) {
    throw MarkerError(MarkerProblem::kMissing, "missing LOOP-BEGIN/LOOP-END marker pair");
  }
  for (const auto& l : all) {
    if (l.number <= begin_line || l.number >= end_line) continue;
    auto t = Trim(l.text);
    if (t.empty() || StartsWith(t, "//") || StartsWith(t, "#") || StartsWith(t, ";")) {
      continue;
    }
    lines.push_back(l);
  }
  if (lines.empty()) {
    throw MarkerError(MarkerProblem::kEmptyRegion, "marked region contains no code");
  }
  return lines;
}

KernelIR ParseKernel(std::span<const SourceLine> lines, Dialect dialect,
                     const ParseOptions& options) {
  KernelIR ir;
  ir.dialect = dialect;
  for (const auto& line : lines) {
    std::string_view text = StripLine(line.text, dialect);
    if (text.empty() || text.front() == '.') continue;  // directives
    std::size_t i = 0;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string mnemonic = Lower(text.substr(0, i));
    for (char c : mnemonic) {
      if (!IsIdentChar(c)) {
        throw SyntaxError(line.number, 1, "malformed mnemonic '" + mnemonic + "'");
      }
    }
    std::string_view rest = Trim(text.substr(i));
    InstructionInstance instr;
    instr.source_line = line.number;
    bool branch = dialect == Dialect::kAArch64 ? IsAArch64Branch(mnemonic)
                                               : IsX86Branch(mnemonic);
    if (branch) {
      auto ops = SplitOperands(rest, line.number);
      ir.back_branch = LoopBranch{mnemonic, ops.empty() ? "" : ops.back(), line.number};
      continue;
    }
    if (ir.back_branch) {
      throw SyntaxError(line.number, 1, "instruction after loop branch");
    }
    if (dialect == Dialect::kAArch64) {
      instr.mnemonic = mnemonic;
      ParseAArch64(instr, rest, options, line.number);
    } else {
      char size_suffix = 0;
      instr.mnemonic = NormalizeX86Mnemonic(mnemonic, &size_suffix);
      ParseX86(instr, rest, options, line.number, size_suffix);
    }
    ir.instructions.push_back(std::move(instr));
  }
  return ir;
}

KernelIR Normalize(KernelIR ir) {
  for (auto& instr : ir.instructions) {
    for (auto& o : instr.operands) {
      if (o.kind == OperandKind::kRegister || o.kind == OperandKind::kPredicate) {
        o.canonical = CanonicalFor(o.reg, ir.dialect);
      } else if (o.kind == OperandKind::kMemory) {
        auto strip = [](const std::string& r) { return r.substr(0, r.find('.')); };
        o.canonical_base = CanonicalFor(strip(o.base), ir.dialect);
        o.canonical_index = CanonicalFor(strip(o.index), ir.dialect);
      }
    }
  }
  return ir;
}

std::string CanonicalRegister(std::string_view reg, Dialect dialect) {
  return CanonicalFor(reg, dialect);
}

KernelIR ParseListing(std::string_view listing, Dialect dialect,
                      const ParseOptions& options) {
  auto lines = ExtractMarkedRegion(listing);
  auto ir = Normalize(ParseKernel(lines, dialect, options));
  if (ir.instructions.empty()) {
    throw MarkerError(MarkerProblem::kEmptyRegion, "marked region contains no instructions");
  }
  return ir;
}

std::string PrettyPrint(const KernelIR& ir) {
  std::ostringstream out;
  for (const auto& instr : ir.instructions) {
    std::vector<Operand> ops = instr.operands;
    out << "  " << instr.mnemonic;
    if (ir.dialect == Dialect::kAArch64) {
      std::rotate(ops.begin(), ops.end() - instr.rotated, ops.end());
      bool first = true;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        out << (first ? " " : ", ");
        first = false;
        if (ops[i].extend == "{}") {
          out << "{";
          std::size_t j = i;
          for (; j < ops.size() && ops[j].extend == "{}"; ++j) {
            out << (j == i ? "" : ", ") << ops[j].reg << ops[j].suffix;
          }
          out << "}";
          i = j - 1;
        } else {
          out << RenderAArch64Operand(ops[i]);
        }
      }
    } else {
      bool first = true;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].mask_decorator) continue;
        out << (first ? " " : ", ");
        first = false;
        out << RenderX86Operand(ops[i]);
        if (i > 0 && ops[i - 1].mask_decorator) {
          out << "{%" << ops[i - 1].reg << "}";
          if (ops[i - 1].zeroing) out << "{z}";
        }
      }
    }
    out << "\n";
  }
  if (ir.back_branch) {
    out << "  " << ir.back_branch->mnemonic;
    if (!ir.back_branch->target.empty()) out << " " << ir.back_branch->target;
    out << "\n";
  }
  return out.str();
}

std::string DumpIr(const KernelIR& ir) {
  std::ostringstream out;
  out << "# dialect " << DialectName(ir.dialect) << "\n";
  for (std::size_t i = 0; i < ir.instructions.size(); ++i) {
    const auto& instr = ir.instructions[i];
    out << i << "\t" << instr.mnemonic;
    for (std::size_t k = 0; k < instr.operands.size(); ++k) {
      const auto& o = instr.operands[k];
      out << (k == 0 ? "\t" : " ; ") << OperandClass(o) << " " << KindName(o.kind);
      if (o.kind == OperandKind::kMemory) {
        out << " base=" << o.canonical_base << " index=" << o.canonical_index
            << " disp=" << o.displacement;
        if (o.pre_index || !o.post_index.empty()) out << " wb";
      } else if (o.kind == OperandKind::kRegister || o.kind == OperandKind::kPredicate) {
        out << " " << o.canonical;
      } else {
        out << " " << o.text;
      }
      out << " " << (o.read ? "r" : "") << (o.written ? "w" : "");
    }
    for (const auto& r : instr.implicit_reads) out << " ; implicit " << r << " r";
    for (const auto& w : instr.implicit_writes) out << " ; implicit " << w << " w";
    out << "\t[" << FormKey(instr) << "]\n";
  }
  if (ir.back_branch) {
    out << "# loop-branch " << ir.back_branch->mnemonic << " "
        << ir.back_branch->target << "\n";
  }
  return out.str();
}

}  // namespace incore
