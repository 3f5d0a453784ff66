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

#include "incore/predictor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "incore/errors.h"

namespace incore {
namespace {

std::string Cell(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s + " ";
  return std::string(width - s.size(), ' ') + s + " ";
}

}  // namespace

std::string_view BottleneckName(Bottleneck b) {
  switch (b) {
    case Bottleneck::kPort: return "port";
    case Bottleneck::kIssue: return "issue";
    case Bottleneck::kLcd: return "lcd";
  }
  return "port";
}

Bottleneck PickBottleneck(const Rational& t_port, const Rational& t_issue,
                          const Rational& lcd) {
  if (t_port >= t_issue && t_port >= lcd) return Bottleneck::kPort;
  if (t_issue >= lcd) return Bottleneck::kIssue;
  return Bottleneck::kLcd;
}

VectorClass InferVectorClass(const KernelIR& kernel) {
  VectorClass v = VectorClass::kScalar;
  for (const auto& in : kernel.instructions) {
    for (const auto& o : in.operands) {
      if (o.kind != OperandKind::kRegister || o.reg_class != RegClass::kVector) continue;
      if (o.width_bytes >= 64) return VectorClass::kWideVector512;
      if (o.width_bytes >= 16) v = VectorClass::kNarrowVector;
    }
  }
  return v;
}

PredictionReport Predict(const KernelIR& kernel, const MachineModel& model) {
  PredictionReport r;
  r.pressure = PortPressure(kernel, model);
  r.t_port = r.pressure.t_port;
  r.t_issue = IssueBound(kernel, model);
  r.graph = BuildGraph(kernel, model);
  r.latency = LoopCarried(r.graph);
  r.lcd = r.latency.lcd;
  r.critical_path = r.latency.critical_path;
  r.bottleneck = PickBottleneck(r.t_port, r.t_issue, r.lcd);
  r.prediction = std::max({r.t_port, r.t_issue, r.lcd});
  r.vclass = InferVectorClass(kernel);

  if (kernel.instructions.empty()) r.diagnostics.push_back("empty kernel: nothing to predict");
  if (r.latency.truncated) {
    r.diagnostics.push_back("cycle enumeration stopped after " +
                            std::to_string(r.latency.cycles_examined) +
                            " cycles; lcd is a partial maximum");
  }
  if (r.lcd > Rational(0)) {
    std::set<std::string> fp_regs;
    for (const auto& cyc : r.latency.lcd_cycles) {
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        std::size_t a = cyc[k], b = cyc[(k + 1) % cyc.size()];
        for (const auto* list : {&r.graph.intra, &r.graph.cross}) {
          for (const auto& e : *list) {
            if (e.from == a && e.to == b && e.fp) fp_regs.insert(e.via);
          }
        }
      }
    }
    if (!fp_regs.empty()) {
      std::string regs;
      for (const auto& reg : fp_regs) regs += (regs.empty() ? "" : ",") + reg;
      r.diagnostics.push_back(
          "loop-carried dependency through FP register(s) " + regs +
          "; for recursive updates such as Gauss-Seidel the hardware can be faster than this bound");
    }
  }
  return r;
}

double CyclesToTime(double cy_per_iter, const MachineModel& model, VectorClass vclass,
                    int active_cores) {
  if (cy_per_iter < 0) throw Error("cycles per iteration must be non-negative");
  double f = SustainedFrequency(model, vclass, active_cores);
  return cy_per_iter / f;
}

void AttachTime(PredictionReport* report, const MachineModel& model, int active_cores) {
  report->active_cores = active_cores;
  report->time_per_iter =
      CyclesToTime(ToDouble(report->prediction), model, report->vclass, active_cores);
}

double RelativePredictionError(double predicted, double measured) {
  if (!(measured > 0)) throw Error("measurement must be positive");
  return (measured - predicted) / measured;
}

RooflineEstimate CombineRoofline(double flops_per_iter, double bytes_per_iter,
                                 double p_core, double bandwidth) {
  if (!(bytes_per_iter > 0)) throw Error("bytes per iteration must be positive");
  if (flops_per_iter < 0) throw Error("flops per iteration must be non-negative");
  RooflineEstimate e;
  e.flops_per_iter = flops_per_iter;
  e.bytes_per_iter = bytes_per_iter;
  e.intensity = flops_per_iter / bytes_per_iter;
  e.p_core = p_core;
  e.p_mem = e.intensity * bandwidth;
  e.p_roof = std::min(e.p_core, e.p_mem);
  e.ridge_intensity = p_core / bandwidth;
  e.memory_bound = e.intensity < e.ridge_intensity;
  return e;
}

RooflineEstimate Roofline(const PredictionReport& report, double flops_per_iter,
                          double bytes_per_iter, const MachineModel& model,
                          int active_cores) {
  double t = CyclesToTime(ToDouble(report.prediction), model, report.vclass, active_cores);
  double p_core = flops_per_iter == 0 ? 0.0
                  : t == 0            ? std::numeric_limits<double>::infinity()
                                      : flops_per_iter / t * active_cores;
  return CombineRoofline(flops_per_iter, bytes_per_iter, p_core, model.mem_bandwidth);
}

std::string FormatReportText(const PredictionReport& r, const KernelIR& kernel,
                             const MachineModel& model, const std::string& kernel_id) {
  std::ostringstream out;
  out << "kernel:        " << kernel_id << "\n";
  out << "machine:       " << model.name << "\n";
  out << "instructions:  " << kernel.instructions.size() << "\n";
  out << "vector class:  " << VectorClassName(r.vclass) << "\n";
  out << "t_port:        " << FormatSig(ToDouble(r.t_port)) << " cy/iter\n";
  out << "t_issue:       " << FormatSig(ToDouble(r.t_issue)) << " cy/iter\n";
  out << "lcd:           " << FormatSig(ToDouble(r.lcd)) << " cy/iter\n";
  out << "critical path: " << r.critical_path << " cy\n";
  out << "prediction:    " << FormatSig(ToDouble(r.prediction)) << " cy/iter (bottleneck: "
      << BottleneckName(r.bottleneck) << ")\n";
  if (r.time_per_iter && r.active_cores) {
    double f = SustainedFrequency(model, r.vclass, *r.active_cores);
    out << "time/iter:     " << FormatSig(*r.time_per_iter * 1e9) << " ns at "
        << FormatSig(f / 1e9) << " GHz, " << *r.active_cores << " cores\n";
  }

  // Per-instruction port table in model port order.
  std::size_t width = 6;
  for (const auto& p : model.ports) width = std::max(width, p.size() + 1);
  std::vector<std::string> text;
  std::size_t text_width = 0;
  for (const auto& in : kernel.instructions) {
    text.push_back(FormKey(in));
    text_width = std::max(text_width, text.back().size());
  }
  out << "\nport pressure [cy/iter]:\n";
  out << Cell("", 4);
  for (const auto& p : model.ports) out << Cell(p, width);
  out << "\n";
  for (std::size_t i = 0; i < kernel.instructions.size(); ++i) {
    std::vector<Rational> load(model.ports.size(), Rational(0));
    const auto& d = Lookup(model, kernel.instructions[i]);
    for (std::size_t k = 0; k < d.uops.size(); ++k) {
      auto it = r.pressure.assignment.find({i, k});
      if (it == r.pressure.assignment.end()) continue;
      for (const auto& share : it->second) load[share.port] += share.fraction * d.uops[k].occupancy;
    }
    out << Cell(std::to_string(i), 4);
    for (const auto& l : load) out << Cell(l == Rational(0) ? "" : FormatSig(ToDouble(l), 3), width);
    out << " " << text[i] << "\n";
  }
  out << Cell("sum", 4);
  for (const auto& l : r.pressure.per_port_load) out << Cell(FormatSig(ToDouble(l), 3), width);
  out << "\n";

  if (!r.latency.lcd_cycles.empty()) {
    out << "\nlcd cycle:";
    for (std::size_t v : r.latency.lcd_cycles.front()) out << " " << v;
    out << "\n";
  }
  if (!r.diagnostics.empty()) {
    out << "\n";
    for (const auto& d : r.diagnostics) out << "note: " << d << "\n";
  }
  return out.str();
}

std::string TsvHeader() { return "kernel_id\tt_port\tt_issue\tlcd\tprediction\tbottleneck\n"; }

std::string FormatReportTsv(const PredictionReport& r, const std::string& kernel_id) {
  return kernel_id + "\t" + FormatSig(ToDouble(r.t_port)) + "\t" +
         FormatSig(ToDouble(r.t_issue)) + "\t" + FormatSig(ToDouble(r.lcd)) + "\t" +
         FormatSig(ToDouble(r.prediction)) + "\t" + std::string(BottleneckName(r.bottleneck)) +
         "\n";
}

}  // namespace incore
