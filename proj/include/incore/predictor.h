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

// In-core lower bound, time per iteration, prediction error and Roofline.

#ifndef INCORE_PREDICTOR_H_
#define INCORE_PREDICTOR_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incore/asm.h"
#include "incore/dep_graph.h"
#include "incore/machine_model.h"
#include "incore/port_scheduler.h"
#include "incore/rational.h"

namespace incore {

enum class Bottleneck { kPort, kIssue, kLcd };
std::string_view BottleneckName(Bottleneck b);

struct PredictionReport {
  Rational t_port{0};
  Rational t_issue{0};
  Rational lcd{0};
  int critical_path = 0;  // informational, not part of the bound
  Rational prediction{0};
  Bottleneck bottleneck = Bottleneck::kPort;
  VectorClass vclass = VectorClass::kScalar;
  std::optional<int> active_cores;
  std::optional<double> time_per_iter;  // seconds
  std::vector<std::string> diagnostics;

  PortPressureResult pressure;
  LatencyResult latency;
  DependencyGraph graph;
};

// max(t_port, t_issue, lcd); ties go to the earlier of port, issue, lcd.
Bottleneck PickBottleneck(const Rational& t_port, const Rational& t_issue,
                          const Rational& lcd);

VectorClass InferVectorClass(const KernelIR& kernel);

PredictionReport Predict(const KernelIR& kernel, const MachineModel& model);

// Fills time_per_iter for the given core count.
void AttachTime(PredictionReport* report, const MachineModel& model, int active_cores);

double CyclesToTime(double cy_per_iter, const MachineModel& model, VectorClass vclass,
                    int active_cores);

// (measured - predicted) / measured; > 0 when the prediction is faster.
double RelativePredictionError(double predicted, double measured);

struct RooflineEstimate {
  double flops_per_iter = 0;
  double bytes_per_iter = 0;
  double intensity = 0;  // flops/byte
  double p_core = 0;     // flops/s
  double p_mem = 0;      // flops/s
  double p_roof = 0;     // flops/s
  double ridge_intensity = 0;  // p_core / bandwidth
  bool memory_bound = false;   // intensity < ridge_intensity
};

// The min law on given rates. p_core may be +inf (zero-cycle kernel).
RooflineEstimate CombineRoofline(double flops_per_iter, double bytes_per_iter,
                                 double p_core, double bandwidth);

// p_core = flops_per_iter / time_per_iter * active_cores.
RooflineEstimate Roofline(const PredictionReport& report, double flops_per_iter,
                          double bytes_per_iter, const MachineModel& model,
                          int active_cores);

std::string FormatReportText(const PredictionReport& report, const KernelIR& kernel,
                             const MachineModel& model, const std::string& kernel_id);

std::string TsvHeader();
std::string FormatReportTsv(const PredictionReport& report, const std::string& kernel_id);

}  // namespace incore

#endif  // INCORE_PREDICTOR_H_
