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
#include "incore/port_scheduler.h"

namespace incore {

const std::vector<ReferenceRow>& ReferenceTable() {
  static const std::vector<ReferenceRow> rows = {
      // Neoverse V2: 128-bit SVE/NEON.
      {"GCS", "gather", "ld1d pred, vmem, vec128", Rational(1, 4), 9, 2},
      {"GCS", "VEC ADD", "fadd vec128, vec128, vec128", Rational(8), 2, 0},
      {"GCS", "VEC MUL", "fmul vec128, vec128, vec128", Rational(8), 3, 0},
      {"GCS", "VEC FMA", "fmla pred, vec128, vec128, vec128", Rational(8), 4, 0},
      {"GCS", "VEC FP Div", "fdiv pred, vec128, vec128, vec128", Rational(2, 5), 5, 0},
      {"GCS", "Scalar ADD", "fadd fp64, fp64, fp64", Rational(4), 2, 0},
      {"GCS", "Scalar MUL", "fmul fp64, fp64, fp64", Rational(4), 3, 0},
      {"GCS", "Scalar FMA", "fmadd fp64, fp64, fp64, fp64", Rational(4), 4, 0},
      {"GCS", "Scalar Div", "fdiv fp64, fp64, fp64", Rational(2, 5), 12, 0},
      // Golden Cove.
      {"SPR", "gather", "vgatherdpd vmem, pred, vec512", Rational(1, 3), 20, 8},
      {"SPR", "VEC ADD", "vaddpd vec512, vec512, vec512", Rational(16), 2, 0},
      {"SPR", "VEC MUL", "vmulpd vec512, vec512, vec512", Rational(16), 4, 0},
      {"SPR", "VEC FMA", "vfmadd231pd vec512, vec512, vec512", Rational(16), 4, 0},
      {"SPR", "VEC FP Div", "vdivpd vec256, vec256, vec256", Rational(1, 2), 14, 0},
      {"SPR", "Scalar ADD", "vaddsd fp64, fp64, fp64", Rational(2), 2, 0},
      {"SPR", "Scalar MUL", "vmulsd fp64, fp64, fp64", Rational(2), 4, 0},
      {"SPR", "Scalar FMA", "vfmadd231sd fp64, fp64, fp64", Rational(2), 5, 0},
      {"SPR", "Scalar Div", "vdivsd fp64, fp64, fp64", Rational(1, 4), 14, 0},
      // Zen 4.
      {"Genoa", "gather", "vgatherdpd vec256, vmem, vec256", Rational(1, 8), 13, 4},
      {"Genoa", "VEC ADD", "vaddpd vec256, vec256, vec256", Rational(8), 3, 0},
      {"Genoa", "VEC MUL", "vmulpd vec256, vec256, vec256", Rational(8), 3, 0},
      {"Genoa", "VEC FMA", "vfmadd231pd vec256, vec256, vec256", Rational(8), 4, 0},
      {"Genoa", "VEC FP Div", "vdivpd vec256, vec256, vec256", Rational(4, 5), 13, 0},
      {"Genoa", "Scalar ADD", "vaddsd fp64, fp64, fp64", Rational(2), 3, 0},
      {"Genoa", "Scalar MUL", "vmulsd fp64, fp64, fp64", Rational(2), 3, 0},
      {"Genoa", "Scalar FMA", "vfmadd231sd fp64, fp64, fp64", Rational(2), 4, 0},
      {"Genoa", "Scalar Div", "vdivsd fp64, fp64, fp64", Rational(1, 5), 13, 0},
  };
  return rows;
}

std::vector<std::string> ValidateModel(const MachineModel& model) {
  std::vector<std::string> diags;
  for (const auto& d : model.instructions) {
    try {
      ReciprocalThroughput(d, model);
    } catch (const std::exception& e) {
      diags.push_back(d.form + ": cannot derive throughput: " + e.what());
    }
  }
  for (const auto& row : ReferenceTable()) {
    if (row.machine != model.name) continue;
    const InstructionDescriptor* d = model.Find(row.form);
    if (!d) {
      diags.push_back(row.row + ": no entry for form '" + row.form + "'");
      continue;
    }
    Rational recip = ReciprocalThroughput(*d, model);
    int per_instr = row.lines_per_instruction > 0 ? row.lines_per_instruction : d->dp_elements;
    Rational tp = recip == Rational(0) ? Rational(0) : Rational(per_instr) / recip;
    if (tp != row.throughput) {
      diags.push_back(row.row + " (" + row.form + "): throughput " + ToString(tp) +
                      (row.lines_per_instruction > 0 ? " CL/cy" : " elem/cy") +
                      ", expected " + ToString(row.throughput));
    }
    if (d->latency != row.latency) {
      diags.push_back(row.row + " (" + row.form + "): latency " +
                      std::to_string(d->latency) + " cy, expected " +
                      std::to_string(row.latency));
    }
  }
  return diags;
}

}  // namespace incore
