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

// Register (and syntactic memory) dependency graph of one loop iteration,
// with back edges into the next iteration.

#ifndef INCORE_DEP_GRAPH_H_
#define INCORE_DEP_GRAPH_H_

#include <cstddef>
#include <string>
#include <vector>

#include "incore/asm.h"
#include "incore/machine_model.h"
#include "incore/rational.h"

namespace incore {

struct DepEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  int latency = 0;
  bool cross = false;  // consumer belongs to the next iteration
  std::string via;     // register, "flags" or "mem"
  bool fp = false;     // carried by an FP/vector register
  friend bool operator==(const DepEdge&, const DepEdge&) = default;
};

struct DependencyGraph {
  std::size_t num_nodes = 0;
  std::vector<int> latency;    // per node, from the model
  std::vector<bool> is_store;  // per node
  std::vector<DepEdge> intra;  // from < to
  std::vector<DepEdge> cross;  // from >= to
};

DependencyGraph BuildGraph(const KernelIR& kernel, const MachineModel& model);

// Longest intra-iteration latency chain. Stores add no latency of their own.
int CriticalPath(const DependencyGraph& graph);

struct LatencyResult {
  int critical_path = 0;
  // Cycles/iteration: for each elementary cycle, summed latency over the
  // number of iterations it spans (its cross-edge count); the maximum.
  Rational lcd{0};
  std::vector<std::vector<std::size_t>> lcd_cycles;  // smallest node first, sorted
  std::size_t cycles_examined = 0;
  bool truncated = false;  // hit the cycle limit; lcd is a partial maximum
};

LatencyResult LoopCarried(const DependencyGraph& graph, std::size_t cycle_limit = 10000);

// "i -> j : lat" per edge, cross edges tagged " (cross)", sorted.
std::string DumpDeps(const DependencyGraph& graph);

}  // namespace incore

#endif  // INCORE_DEP_GRAPH_H_
