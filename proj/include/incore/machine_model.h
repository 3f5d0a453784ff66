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

// Declarative port model of one microarchitecture.
//
// A model lists the scheduler ports, the issue width, and for every supported
// instruction form the µ-ops it decomposes into (each µ-op may run on any port
// of an eligible set and occupies it for a number of cycles) plus its
// latency. Frequency curves, memory bandwidth and write-allocate behavior
// complete the node-level picture. See docs/model-format.md for the file
// grammar.

#ifndef INCORE_MACHINE_MODEL_H_
#define INCORE_MACHINE_MODEL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "incore/asm.h"
#include "incore/rational.h"

namespace incore {

using PortId = std::string;

struct Uop {
  std::vector<std::size_t> ports;  // indices into MachineModel::ports, sorted
  Rational occupancy{1};
  friend bool operator==(const Uop&, const Uop&) = default;
};

// What an instruction does, as far as flop and traffic accounting cares.
enum class OpClass { kOther, kFma, kAdd, kMul, kDiv, kLoad, kStore, kGather };

std::string_view OpClassName(OpClass op);
std::optional<OpClass> ParseOpClass(std::string_view name);

struct InstructionDescriptor {
  std::string form;  // FormKey syntax
  std::vector<Uop> uops;
  int latency = 0;
  OpClass op = OpClass::kOther;
  int dp_elements = 0;  // double-precision elements processed per instruction
  std::string notes;
  friend bool operator==(const InstructionDescriptor&,
                         const InstructionDescriptor&) = default;
};

enum class VectorClass { kScalar = 0, kNarrowVector = 1, kWideVector512 = 2 };

std::string_view VectorClassName(VectorClass v);
std::optional<VectorClass> ParseVectorClass(std::string_view name);

struct FrequencyCurve {
  std::vector<std::pair<int, double>> points;  // (active cores, Hz)
  friend bool operator==(const FrequencyCurve&, const FrequencyCurve&) = default;
};

struct UnitSpec {
  int count = 0;
  int bytes = 0;
  friend bool operator==(const UnitSpec&, const UnitSpec&) = default;
};

struct MachineModel {
  std::string name;
  Dialect isa = Dialect::kAArch64;
  std::vector<PortId> ports;
  int issue_width = 0;
  int simd_bytes = 0;
  UnitSpec load_units;
  UnitSpec store_units;
  int cores_per_chip = 0;
  int numa_domain_cores = 0;
  double base_freq = 0;  // Hz
  double max_freq = 0;   // Hz
  double mem_bandwidth = 0;       // bytes/s, measured
  double mem_bandwidth_peak = 0;  // bytes/s, theoretical (informational)
  std::map<VectorClass, FrequencyCurve> freq_curves;
  // 0 means "use the consuming load's latency".
  int store_forward_latency = 0;
  // Latency of a base-register update by a pre/post-indexed access.
  int address_update_latency = 1;
  std::string wa_standard = "full-wa";
  std::string wa_nontemporal = "nt-perfect";
  std::vector<InstructionDescriptor> instructions;

  // Index of a port by name, or nullopt.
  std::optional<std::size_t> PortIndex(std::string_view port) const;
  // Exact form match, or nullptr.
  const InstructionDescriptor* Find(std::string_view form) const;

  // Rebuilds the form index; called by the loader and after edits.
  void Reindex();

  friend bool operator==(const MachineModel& a, const MachineModel& b);

 private:
  std::unordered_map<std::string, std::size_t> form_index_;
};

// Parses the model text. `source` names the text in error messages.
MachineModel ParseModel(std::string_view text, const std::string& source = "<model>");
MachineModel LoadModel(const std::string& path);

// Throws ModelError when an invariant is broken (ports, widths, curves, ...).
void CheckInvariants(const MachineModel& model);

// Inverse of ParseModel; ParseModel(SerializeModel(m)) == m.
std::string SerializeModel(const MachineModel& model);

// Exact match on mnemonic and operand classes. Throws UnknownInstruction with
// the closest known forms when there is no entry.
const InstructionDescriptor& Lookup(const MachineModel& model,
                                    const InstructionInstance& instr);

// Piecewise-linear in active cores, clamped at the curve ends. Falls back to
// the next lower vector class when the model has no curve for `vclass`.
double SustainedFrequency(const MachineModel& model, VectorClass vclass,
                          int active_cores);

// DP flops per instruction (FMA counts two per element).
int FlopsPerInstruction(const InstructionDescriptor& d);

// Best DP flops per cycle over fractional mixes of FP arithmetic forms, under
// port capacities and the issue width.
struct PeakMix {
  Rational flops_per_cycle{0};
  std::vector<std::pair<std::string, Rational>> mix;  // form -> instr/cycle
};
PeakMix PeakFlopsPerCycle(const MachineModel& model);

double TheoreticalPeakFlops(const MachineModel& model, double freq_hz, int cores);

// Compares every reference row for this machine against the model and
// returns one line per mismatch.
std::vector<std::string> ValidateModel(const MachineModel& model);

// Reference throughput/latency rows for the shipped machines.
struct ReferenceRow {
  std::string machine;
  std::string row;      // "VEC FMA", "Scalar Div", "gather", ...
  std::string form;
  Rational throughput;  // DP elements/cy, or cache lines/cy for gathers
  int latency;
  int lines_per_instruction;  // gathers only: one cache line per element
};
const std::vector<ReferenceRow>& ReferenceTable();

}  // namespace incore

#endif  // INCORE_MACHINE_MODEL_H_
