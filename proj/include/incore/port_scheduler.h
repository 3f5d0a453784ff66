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

// Throughput bound of a loop body: optimal fractional assignment of µ-ops to
// ports (minimizing the busiest port) and the issue-width bound.

#ifndef INCORE_PORT_SCHEDULER_H_
#define INCORE_PORT_SCHEDULER_H_

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "incore/asm.h"
#include "incore/machine_model.h"
#include "incore/rational.h"

namespace incore {

struct UopDemand {
  std::vector<std::size_t> ports;  // eligible ports, non-empty
  Rational occupancy{1};
};

struct PortShare {
  std::size_t port;
  Rational fraction;
  friend bool operator==(const PortShare&, const PortShare&) = default;
};

struct Schedule {
  Rational t{0};                            // max per-port load
  std::vector<Rational> port_load;          // one per port
  std::vector<std::vector<PortShare>> shares;  // one list per µ-op
};

// Exact min-max assignment. Port loads are the lexicographically balanced
// ones, so they do not depend on the order of `uops`.
Schedule MinMaxAssign(const std::vector<UopDemand>& uops, std::size_t num_ports);

struct PortPressureResult {
  std::vector<PortId> ports;          // model order
  std::vector<Rational> per_port_load;
  // (instruction index, µ-op index) -> shares
  std::map<std::pair<std::size_t, std::size_t>, std::vector<PortShare>> assignment;
  Rational t_port{0};
};

PortPressureResult PortPressure(const KernelIR& kernel, const MachineModel& model);

// Total µ-ops per iteration over the issue width.
Rational IssueBound(const KernelIR& kernel, const MachineModel& model);

// Single-instruction kernel: reciprocal throughput in cycles/instruction.
Rational ReciprocalThroughput(const InstructionDescriptor& d, const MachineModel& model);

}  // namespace incore

#endif  // INCORE_PORT_SCHEDULER_H_
