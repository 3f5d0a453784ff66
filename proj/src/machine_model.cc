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

#include "incore/machine_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "incore/errors.h"
#include "incore/wa_traffic.h"

namespace incore {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> SplitWs(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

const std::set<std::string, std::less<>>& OperandClasses() {
  static const std::set<std::string, std::less<>> kClasses = {
      "gpr8", "gpr16", "gpr32", "gpr64", "fp8", "fp16", "fp32", "fp64",
      "vec64", "vec128", "vec256", "vec512", "vec1024", "vec2048", "pred",
      "mem", "vmem", "imm", "label"};
  return kClasses;
}

class ModelParser {
 public:
  ModelParser(std::string_view text, std::string source)
      : text_(text), source_(std::move(source)) {}

  MachineModel Parse() {
    enum class Section { kNone, kMachine, kInstruction };
    Section section = Section::kNone;
    bool saw_machine = false;
    std::set<std::string> machine_keys;
    std::set<std::string> instr_keys;
    std::map<std::string, int> form_lines;
    int instr_line = 0;

    auto finish_instruction = [&]() {
      if (section != Section::kInstruction) return;
      for (const char* required : {"form", "uops", "latency"}) {
        if (!instr_keys.count(required)) {
          Fail(instr_line, std::string("instruction is missing '") + required + "'");
        }
      }
      auto& d = model_.instructions.back();
      if (auto [it, inserted] = form_lines.emplace(d.form, instr_line); !inserted) {
        Fail(instr_line, "duplicate instruction form '" + d.form +
                             "' (first defined at line " +
                             std::to_string(it->second) + ")");
      }
    };

    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text_.size()) {
      auto nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view line = text_.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      line = StripComment(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line == "[machine]") {
          if (saw_machine) Fail(line_no, "second [machine] section");
          if (section == Section::kInstruction) {
            Fail(line_no, "[machine] must come before instructions");
          }
          section = Section::kMachine;
          saw_machine = true;
        } else if (line == "[instruction]") {
          if (!saw_machine) Fail(line_no, "[instruction] before [machine]");
          finish_instruction();
          section = Section::kInstruction;
          instr_keys.clear();
          instr_line = line_no;
          model_.instructions.emplace_back();
        } else {
          Fail(line_no, "unknown section " + std::string(line));
        }
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string_view::npos) Fail(line_no, "expected 'key = value'");
      std::string key(Trim(line.substr(0, eq)));
      std::string_view value = Trim(line.substr(eq + 1));
      if (key.empty()) Fail(line_no, "empty key");
      if (section == Section::kNone) Fail(line_no, "key outside of a section");
      auto& seen = section == Section::kMachine ? machine_keys : instr_keys;
      if (!seen.insert(key).second) Fail(line_no, "duplicate key '" + key + "'");
      if (section == Section::kMachine) {
        MachineKey(line_no, key, value);
      } else {
        InstructionKey(line_no, key, value, model_.instructions.back());
      }
    }
    finish_instruction();
    if (!saw_machine) Fail(line_no, "no [machine] section");
    for (const char* required :
         {"name", "isa", "ports", "issue_width", "simd_bytes", "load_units",
          "store_units", "cores_per_chip", "base_freq", "max_freq",
          "mem_bandwidth"}) {
      if (!machine_keys.count(required)) {
        Fail(0, std::string("[machine] is missing '") + required + "'");
      }
    }
    if (model_.numa_domain_cores == 0) model_.numa_domain_cores = model_.cores_per_chip;
    model_.Reindex();
    try {
      CheckInvariants(model_);
    } catch (const ModelError& e) {
      throw ModelError(source_ + ": " + e.what());
    }
    return std::move(model_);
  }

 private:
  static std::string_view StripComment(std::string_view line) {
    auto t = Trim(line);
    if (!t.empty() && t.front() == '#') return {};
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i] == '#' && std::isspace(static_cast<unsigned char>(t[i - 1]))) {
        return Trim(t.substr(0, i));
      }
    }
    return t;
  }

  [[noreturn]] void Fail(int line, const std::string& what) const {
    throw ParseError(source_, line, what);
  }

  int Int(int line, std::string_view v, int min = 0) const {
    auto r = ParseRational(v);
    if (!r || r->denominator() != 1 || r->numerator() < min ||
        r->numerator() > 1'000'000'000) {
      Fail(line, "expected an integer >= " + std::to_string(min) + ", got '" +
                     std::string(v) + "'");
    }
    return static_cast<int>(r->numerator());
  }

  // "3.4GHz", "2550 MHz", "467GB/s", "1e9Hz".
  double Quantity(int line, std::string_view v, std::string_view kind) const {
    std::string s(Trim(v));
    std::size_t idx = 0;
    double x = 0;
    try {
      x = std::stod(s, &idx);
    } catch (...) {
      Fail(line, "expected a number, got '" + s + "'");
    }
    std::string unit(Trim(std::string_view(s).substr(idx)));
    double scale = 0;
    if (kind == "freq") {
      if (unit == "Hz" || unit.empty()) scale = 1;
      else if (unit == "kHz") scale = 1e3;
      else if (unit == "MHz") scale = 1e6;
      else if (unit == "GHz") scale = 1e9;
    } else {
      if (unit == "B/s" || unit.empty()) scale = 1;
      else if (unit == "kB/s" || unit == "KB/s") scale = 1e3;
      else if (unit == "MB/s") scale = 1e6;
      else if (unit == "GB/s") scale = 1e9;
      else if (unit == "TB/s") scale = 1e12;
    }
    if (scale == 0) Fail(line, "unknown unit '" + unit + "'");
    if (!(x >= 0) || !std::isfinite(x)) Fail(line, "quantity must be non-negative");
    return x * scale;
  }

  UnitSpec Units(int line, std::string_view v) const {
    auto x = v.find('x');
    if (x == std::string_view::npos) Fail(line, "expected '<count>x<bytes>'");
    return UnitSpec{Int(line, Trim(v.substr(0, x)), 1), Int(line, Trim(v.substr(x + 1)), 1)};
  }

  void MachineKey(int line, const std::string& key, std::string_view value) {
    auto& m = model_;
    if (key == "name") {
      if (value.empty()) Fail(line, "empty name");
      m.name = std::string(value);
    } else if (key == "isa") {
      auto d = ParseDialect(value);
      if (!d) Fail(line, "isa must be aarch64 or x86-att");
      m.isa = *d;
    } else if (key == "ports") {
      m.ports = SplitWs(value);
      std::set<std::string> unique(m.ports.begin(), m.ports.end());
      if (unique.size() != m.ports.size()) Fail(line, "duplicate port name");
      if (m.ports.empty()) Fail(line, "no ports");
    } else if (key == "issue_width") {
      m.issue_width = Int(line, value, 1);
    } else if (key == "simd_bytes") {
      m.simd_bytes = Int(line, value, 1);
    } else if (key == "load_units") {
      m.load_units = Units(line, value);
    } else if (key == "store_units") {
      m.store_units = Units(line, value);
    } else if (key == "cores_per_chip") {
      m.cores_per_chip = Int(line, value, 1);
    } else if (key == "numa_domain_cores") {
      m.numa_domain_cores = Int(line, value, 1);
    } else if (key == "base_freq") {
      m.base_freq = Quantity(line, value, "freq");
    } else if (key == "max_freq") {
      m.max_freq = Quantity(line, value, "freq");
    } else if (key == "mem_bandwidth") {
      m.mem_bandwidth = Quantity(line, value, "bw");
    } else if (key == "mem_bandwidth_peak") {
      m.mem_bandwidth_peak = Quantity(line, value, "bw");
    } else if (key == "store_forward_latency") {
      m.store_forward_latency = Int(line, value, 0);
    } else if (key == "address_update_latency") {
      m.address_update_latency = Int(line, value, 0);
    } else if (key == "wa_standard" || key == "wa_nontemporal") {
      try {
        ParseWAMode(value);
      } catch (const Error& e) {
        Fail(line, e.what());
      }
      (key == "wa_standard" ? m.wa_standard : m.wa_nontemporal) = std::string(value);
    } else if (key.rfind("freq.", 0) == 0) {
      auto vclass = ParseVectorClass(std::string_view(key).substr(5));
      if (!vclass) Fail(line, "unknown vector class in '" + key + "'");
      FrequencyCurve curve;
      for (const auto& point : SplitWs(value)) {
        auto colon = point.find(':');
        if (colon == std::string::npos) Fail(line, "expected '<cores>:<freq>'");
        curve.points.emplace_back(Int(line, point.substr(0, colon), 1),
                                  Quantity(line, point.substr(colon + 1), "freq"));
      }
      if (curve.points.empty()) Fail(line, "empty frequency curve");
      m.freq_curves[*vclass] = std::move(curve);
    } else {
      Fail(line, "unknown key '" + key + "' in [machine]");
    }
  }

  void InstructionKey(int line, const std::string& key, std::string_view value,
                      InstructionDescriptor& d) {
    if (key == "form") {
      d.form = NormalizeForm(line, value);
    } else if (key == "uops") {
      if (model_.ports.empty()) Fail(line, "ports must be declared before uops");
      d.uops = Uops(line, value);
    } else if (key == "latency") {
      d.latency = Int(line, value, 0);
    } else if (key == "op") {
      auto op = ParseOpClass(value);
      if (!op) Fail(line, "unknown op class '" + std::string(value) + "'");
      d.op = *op;
    } else if (key == "dp_elements") {
      d.dp_elements = Int(line, value, 0);
    } else if (key == "notes") {
      d.notes = std::string(value);
    } else {
      Fail(line, "unknown key '" + key + "' in [instruction]");
    }
  }

  std::string NormalizeForm(int line, std::string_view value) const {
    auto t = Trim(value);
    std::size_t i = 0;
    while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    std::string form(t.substr(0, i));
    if (form.empty()) Fail(line, "empty form");
    for (char& c : form) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto rest = Trim(t.substr(i));
    if (rest.empty()) return form;
    bool first = true;
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      if (comma == std::string_view::npos) comma = rest.size();
      std::string cls(Trim(rest.substr(start, comma - start)));
      if (!OperandClasses().count(cls)) {
        Fail(line, "unknown operand class '" + cls + "'");
      }
      form += first ? " " : ", ";
      form += cls;
      first = false;
      start = comma + 1;
    }
    return form;
  }

  std::vector<Uop> Uops(int line, std::string_view value) const {
    std::vector<Uop> uops;
    for (const auto& tok : SplitWs(value)) {
      auto close = tok.find('}');
      if (tok.front() != '{' || close == std::string::npos) {
        Fail(line, "expected '{P0|P1}:occupancy', got '" + tok + "'");
      }
      Uop u;
      std::string set = tok.substr(1, close - 1);
      std::size_t start = 0;
      while (start <= set.size()) {
        auto bar = set.find('|', start);
        if (bar == std::string::npos) bar = set.size();
        std::string port = set.substr(start, bar - start);
        auto idx = model_.PortIndex(port);
        if (!idx) Fail(line, "unknown port '" + port + "'");
        u.ports.push_back(*idx);
        start = bar + 1;
      }
      std::sort(u.ports.begin(), u.ports.end());
      if (std::adjacent_find(u.ports.begin(), u.ports.end()) != u.ports.end()) {
        Fail(line, "port listed twice in one µ-op");
      }
      std::string rest = tok.substr(close + 1);
      if (!rest.empty()) {
        if (rest.front() != ':') Fail(line, "expected ':' after port set");
        auto occ = ParseRational(rest.substr(1));
        if (!occ) Fail(line, "bad occupancy '" + rest.substr(1) + "'");
        u.occupancy = *occ;
      }
      uops.push_back(std::move(u));
    }
    return uops;
  }

  std::string_view text_;
  std::string source_;
  MachineModel model_;
};

std::string QuantityText(double v, const char* unit) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g%s", v, unit);
  return buf;
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::string_view OpClassName(OpClass op) {
  switch (op) {
    case OpClass::kOther: return "other";
    case OpClass::kFma: return "fma";
    case OpClass::kAdd: return "add";
    case OpClass::kMul: return "mul";
    case OpClass::kDiv: return "div";
    case OpClass::kLoad: return "load";
    case OpClass::kStore: return "store";
    case OpClass::kGather: return "gather";
  }
  return "other";
}

std::optional<OpClass> ParseOpClass(std::string_view name) {
  for (auto op : {OpClass::kOther, OpClass::kFma, OpClass::kAdd, OpClass::kMul,
                  OpClass::kDiv, OpClass::kLoad, OpClass::kStore, OpClass::kGather}) {
    if (OpClassName(op) == name) return op;
  }
  return std::nullopt;
}

std::string_view VectorClassName(VectorClass v) {
  switch (v) {
    case VectorClass::kScalar: return "scalar";
    case VectorClass::kNarrowVector: return "narrow-vector";
    case VectorClass::kWideVector512: return "wide-vector-512";
  }
  return "scalar";
}

std::optional<VectorClass> ParseVectorClass(std::string_view name) {
  for (auto v : {VectorClass::kScalar, VectorClass::kNarrowVector,
                 VectorClass::kWideVector512}) {
    if (VectorClassName(v) == name) return v;
  }
  return std::nullopt;
}

std::optional<std::size_t> MachineModel::PortIndex(std::string_view port) const {
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (ports[i] == port) return i;
  }
  return std::nullopt;
}

const InstructionDescriptor* MachineModel::Find(std::string_view form) const {
  auto it = form_index_.find(std::string(form));
  return it == form_index_.end() ? nullptr : &instructions[it->second];
}

void MachineModel::Reindex() {
  form_index_.clear();
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    form_index_.emplace(instructions[i].form, i);
  }
}

bool operator==(const MachineModel& a, const MachineModel& b) {
  return a.name == b.name && a.isa == b.isa && a.ports == b.ports &&
         a.issue_width == b.issue_width && a.simd_bytes == b.simd_bytes &&
         a.load_units == b.load_units && a.store_units == b.store_units &&
         a.cores_per_chip == b.cores_per_chip &&
         a.numa_domain_cores == b.numa_domain_cores &&
         a.base_freq == b.base_freq && a.max_freq == b.max_freq &&
         a.mem_bandwidth == b.mem_bandwidth &&
         a.mem_bandwidth_peak == b.mem_bandwidth_peak &&
         a.freq_curves == b.freq_curves &&
         a.store_forward_latency == b.store_forward_latency &&
         a.address_update_latency == b.address_update_latency &&
         a.wa_standard == b.wa_standard && a.wa_nontemporal == b.wa_nontemporal &&
         a.instructions == b.instructions;
}

MachineModel ParseModel(std::string_view text, const std::string& source) {
  return ModelParser(text, source).Parse();
}

MachineModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseModel(buf.str(), path);
}

void CheckInvariants(const MachineModel& m) {
  auto fail = [&](const std::string& what) { throw ModelError(m.name + ": " + what); };
  if (m.ports.empty()) fail("no ports declared");
  if (m.issue_width <= 0) fail("issue_width must be positive");
  if (m.simd_bytes <= 0) fail("simd_bytes must be positive");
  if (m.cores_per_chip <= 0) fail("cores_per_chip must be positive");
  if (m.numa_domain_cores <= 0 || m.numa_domain_cores > m.cores_per_chip) {
    fail("numa_domain_cores must be within [1, cores_per_chip]");
  }
  if (m.base_freq <= 0 || m.max_freq < m.base_freq) {
    fail("frequencies must satisfy 0 < base_freq <= max_freq");
  }
  if (m.mem_bandwidth <= 0) fail("mem_bandwidth must be positive");
  for (const auto& d : m.instructions) {
    if (d.uops.empty()) fail("form '" + d.form + "' has no µ-ops");
    if (static_cast<int>(d.uops.size()) > m.issue_width) {
      fail("form '" + d.form + "' has more µ-ops than issue_width");
    }
    for (const auto& u : d.uops) {
      if (u.ports.empty()) fail("form '" + d.form + "' has a µ-op without ports");
      for (auto p : u.ports) {
        if (p >= m.ports.size()) fail("form '" + d.form + "' references an undeclared port");
      }
      if (u.occupancy <= Rational(0)) fail("form '" + d.form + "' has non-positive occupancy");
      if (u.occupancy.denominator() != 1 && u.occupancy < Rational(1)) {
        fail("form '" + d.form + "' has a fractional occupancy below one cycle");
      }
    }
  }
  for (const auto& [vclass, curve] : m.freq_curves) {
    const std::string label = "frequency curve " + std::string(VectorClassName(vclass));
    if (curve.points.empty()) fail(label + " is empty");
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      auto [cores, hz] = curve.points[i];
      if (i > 0 && cores <= curve.points[i - 1].first) {
        fail(label + " core counts must be strictly increasing");
      }
      if (cores > m.cores_per_chip) fail(label + " exceeds cores_per_chip");
      if (hz < 0.5 * m.base_freq || hz > m.max_freq) {
        fail(label + " leaves [0.5 x base_freq, max_freq]");
      }
    }
  }
  for (const auto* mode : {&m.wa_standard, &m.wa_nontemporal}) {
    try {
      ParseWAMode(*mode);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
}

std::string SerializeModel(const MachineModel& m) {
  std::ostringstream out;
  out << "[machine]\n";
  out << "name = " << m.name << "\n";
  out << "isa = " << DialectName(m.isa) << "\n";
  out << "ports =";
  for (const auto& p : m.ports) out << " " << p;
  out << "\n";
  out << "issue_width = " << m.issue_width << "\n";
  out << "simd_bytes = " << m.simd_bytes << "\n";
  out << "load_units = " << m.load_units.count << "x" << m.load_units.bytes << "\n";
  out << "store_units = " << m.store_units.count << "x" << m.store_units.bytes << "\n";
  out << "cores_per_chip = " << m.cores_per_chip << "\n";
  out << "numa_domain_cores = " << m.numa_domain_cores << "\n";
  out << "base_freq = " << QuantityText(m.base_freq, "Hz") << "\n";
  out << "max_freq = " << QuantityText(m.max_freq, "Hz") << "\n";
  out << "mem_bandwidth = " << QuantityText(m.mem_bandwidth, "B/s") << "\n";
  if (m.mem_bandwidth_peak > 0) {
    out << "mem_bandwidth_peak = " << QuantityText(m.mem_bandwidth_peak, "B/s") << "\n";
  }
  for (const auto& [vclass, curve] : m.freq_curves) {
    out << "freq." << VectorClassName(vclass) << " =";
    for (const auto& [cores, hz] : curve.points) {
      out << " " << cores << ":" << QuantityText(hz, "Hz");
    }
    out << "\n";
  }
  out << "store_forward_latency = " << m.store_forward_latency << "\n";
  out << "address_update_latency = " << m.address_update_latency << "\n";
  out << "wa_standard = " << m.wa_standard << "\n";
  out << "wa_nontemporal = " << m.wa_nontemporal << "\n";
  for (const auto& d : m.instructions) {
    out << "\n[instruction]\n";
    out << "form = " << d.form << "\n";
    out << "uops =";
    for (const auto& u : d.uops) {
      out << " {";
      for (std::size_t i = 0; i < u.ports.size(); ++i) {
        out << (i ? "|" : "") << m.ports[u.ports[i]];
      }
      out << "}:" << ToString(u.occupancy);
    }
    out << "\n";
    out << "latency = " << d.latency << "\n";
    out << "op = " << OpClassName(d.op) << "\n";
    out << "dp_elements = " << d.dp_elements << "\n";
    if (!d.notes.empty()) out << "notes = " << d.notes << "\n";
  }
  return out.str();
}

const InstructionDescriptor& Lookup(const MachineModel& model,
                                    const InstructionInstance& instr) {
  const std::string form = FormKey(instr);
  std::vector<const InstructionDescriptor*> matches;
  for (const auto& d : model.instructions) {
    if (d.form == form) matches.push_back(&d);
  }
  if (matches.size() > 1) {
    throw AmbiguousForm("form '" + form + "' matches several entries in " + model.name);
  }
  if (matches.size() == 1) return *matches.front();

  std::vector<std::string> nearest;
  for (const auto& d : model.instructions) {
    if (d.form.substr(0, d.form.find(' ')) == instr.mnemonic) nearest.push_back(d.form);
  }
  if (nearest.empty()) {
    std::map<std::string, std::size_t> distance;
    for (const auto& d : model.instructions) {
      std::string mn = d.form.substr(0, d.form.find(' '));
      distance.emplace(mn, EditDistance(mn, instr.mnemonic));
    }
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const auto& [mn, dist] : distance) ranked.emplace_back(dist, mn);
    std::sort(ranked.begin(), ranked.end());
    for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) {
      nearest.push_back(ranked[i].second);
    }
  }
  if (nearest.size() > 5) nearest.resize(5);
  throw UnknownInstruction(form, std::move(nearest));
}

double SustainedFrequency(const MachineModel& model, VectorClass vclass,
                          int active_cores) {
  if (active_cores < 1 || active_cores > model.cores_per_chip) {
    throw Error("active cores " + std::to_string(active_cores) +
                " outside [1, " + std::to_string(model.cores_per_chip) + "] for " +
                model.name);
  }
  const FrequencyCurve* curve = nullptr;
  for (int v = static_cast<int>(vclass); v >= 0 && !curve; --v) {
    auto it = model.freq_curves.find(static_cast<VectorClass>(v));
    if (it != model.freq_curves.end()) curve = &it->second;
  }
  if (!curve) {
    throw Error("model " + model.name + " has no frequency curve for " +
                std::string(VectorClassName(vclass)) + " or below");
  }
  const auto& pts = curve->points;
  if (active_cores <= pts.front().first) return pts.front().second;
  if (active_cores >= pts.back().first) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (active_cores <= pts[i].first) {
      auto [c0, f0] = pts[i - 1];
      auto [c1, f1] = pts[i];
      double t = static_cast<double>(active_cores - c0) / (c1 - c0);
      return f0 + t * (f1 - f0);
    }
  }
  return pts.back().second;
}

int FlopsPerInstruction(const InstructionDescriptor& d) {
  switch (d.op) {
    case OpClass::kFma: return 2 * d.dp_elements;
    case OpClass::kAdd:
    case OpClass::kMul: return d.dp_elements;
    default: return 0;
  }
}

double TheoreticalPeakFlops(const MachineModel& model, double freq_hz, int cores) {
  return ToDouble(PeakFlopsPerCycle(model).flops_per_cycle) * freq_hz * cores;
}

}  // namespace incore
