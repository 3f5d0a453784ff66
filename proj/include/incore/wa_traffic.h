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

// Memory traffic of store streams under write-allocate (WA) regimes.
//
// The traffic ratio is (bytes moved to/from memory) / (bytes stored): 2 when
// every store miss reads the line first, 1 when the line is claimed without
// the read.

#ifndef INCORE_WA_TRAFFIC_H_
#define INCORE_WA_TRAFFIC_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace incore {

struct MachineModel;

enum class WAKind { kFullWA, kAutoEvasion, kSpecI2M, kNtPerfect, kNtResidual };

// Text forms:
//   full-wa | auto-evasion | nt-perfect
//   speci2m:<max_reduction>[@<util>:<act>,<util>:<act>,...]
//   nt-residual:<residual>[@<min_cores>]
struct WAMode {
  WAKind kind = WAKind::kFullWA;
  double max_reduction = 0;  // speci2m
  // speci2m: activation in [0,1] vs. ccNUMA-domain utilization in [0,1],
  // piecewise linear and clamped. Default: off below half the domain, full on
  // at a saturated domain.
  std::vector<std::pair<double, double>> activation = {{0.5, 0.0}, {1.0, 1.0}};
  double residual = 0;            // nt-residual
  int residual_min_cores = 1;     // nt-residual: no residual below this count
};

WAMode ParseWAMode(std::string_view text);
std::string FormatWAMode(const WAMode& mode);

// Modes a model declares for ordinary and non-temporal stores.
WAMode StandardStoreMode(const MachineModel& machine);
WAMode NonTemporalStoreMode(const MachineModel& machine);

double Activation(const WAMode& mode, double utilization);

double TrafficRatio(const WAMode& mode, const MachineModel& machine, int active_cores);

struct TrafficSpec {
  double load_bytes_per_iter = 0;
  double store_bytes_per_iter = 0;
  bool streaming = true;  // stores overwrite whole cache lines
};

// load + store * ratio; partial-line stores always pay the full WA.
double EffectiveTraffic(const TrafficSpec& spec, const WAMode& mode,
                        const MachineModel& machine, int active_cores);

struct RatioCurve {
  std::string name;
  std::vector<std::pair<int, double>> points;  // (active cores, ratio)
};

// One curve per ratio column of a header-led TSV (column 0: core count).
std::vector<RatioCurve> ParseRatioCurves(std::string_view tsv,
                                         const std::string& source = "<tsv>");
std::vector<RatioCurve> LoadRatioCurves(const std::string& path);

// Largest |measured - modeled| over the curve's points.
double MaxAbsDeviation(const RatioCurve& curve, const WAMode& mode,
                       const MachineModel& machine);

}  // namespace incore

#endif  // INCORE_WA_TRAFFIC_H_
