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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "incore/errors.h"
#include "incore/port_scheduler.h"
#include "test_util.h"

namespace incore {
namespace {

using testing::Kernel;
using testing::Shipped;

const char* kTiny = R"(
[machine]
name = Tiny
isa = aarch64
ports = A B
issue_width = 2
simd_bytes = 16
load_units = 2x16
store_units = 1x16
cores_per_chip = 4
base_freq = 2GHz
max_freq = 3GHz
mem_bandwidth = 100GB/s
freq.scalar = 1:3GHz 4:2GHz

[instruction]
form = fadd vec128, vec128, vec128
uops = {A|B}:1
latency = 2
op = add
dp_elements = 2
)";

TEST(LoadModel, ShippedShapes) {
  EXPECT_EQ(Shipped("gcs").ports.size(), 17u);
  EXPECT_EQ(Shipped("spr").ports.size(), 12u);
  EXPECT_EQ(Shipped("genoa").ports.size(), 13u);
  EXPECT_EQ(Shipped("gcs").simd_bytes, 16);
  EXPECT_EQ(Shipped("spr").simd_bytes, 64);
  EXPECT_EQ(Shipped("genoa").simd_bytes, 32);
}

TEST(LoadModel, IssueWidthCoversEveryForm) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    const auto& m = Shipped(name);
    for (const auto& d : m.instructions) {
      EXPECT_LE(static_cast<int>(d.uops.size()), m.issue_width) << name << " " << d.form;
    }
  }
}

TEST(ParseModel, Minimal) {
  auto m = ParseModel(kTiny);
  EXPECT_EQ(m.name, "Tiny");
  EXPECT_EQ(m.numa_domain_cores, 4);
  ASSERT_EQ(m.instructions.size(), 1u);
  EXPECT_EQ(m.instructions[0].uops[0].ports, (std::vector<std::size_t>{0, 1}));
}

TEST(ParseModel, Rejections) {
  EXPECT_THROW(ParseModel(""), ParseError);
  std::string t = kTiny;
  EXPECT_THROW(ParseModel(t + "bogus = 1\n"), ParseError);
  auto undeclared = t;
  undeclared.replace(undeclared.find("{A|B}"), 5, "{A|C}");
  EXPECT_THROW(ParseModel(undeclared), Error);
  EXPECT_THROW(ParseModel(t + "\n[instruction]\nform = fadd vec128, vec128, vec128\n"
                              "uops = {A}:1\nlatency = 2\n"),
               Error);
  auto fractional = t;
  fractional.replace(fractional.find("{A|B}:1"), 7, "{A|B}:0.5");
  EXPECT_THROW(ParseModel(fractional), Error);
  auto slow = t;
  slow.replace(slow.find("4:2GHz"), 6, "4:0.5GHz");
  EXPECT_THROW(ParseModel(slow), Error);
}

TEST(ParseModel, ErrorCarriesLine) {
  try {
    ParseModel(std::string(kTiny) + "\nnonsense line\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 20);
  }
}

TEST(SerializeModel, RoundTrip) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    const auto& m = Shipped(name);
    EXPECT_EQ(ParseModel(SerializeModel(m)), m) << name;
  }
  auto tiny = ParseModel(kTiny);
  EXPECT_EQ(ParseModel(SerializeModel(tiny)), tiny);
}

TEST(Lookup, GcsVectorFma) {
  const auto& m = Shipped("gcs");
  auto ir = Kernel(m, {"fmla z0.d, p0/m, z1.d, z2.d"});
  const auto& d = Lookup(m, ir.instructions[0]);
  EXPECT_EQ(d.latency, 4);
  ASSERT_EQ(d.uops.size(), 1u);
  EXPECT_EQ(d.uops[0].ports.size(), 4u);
}

TEST(Lookup, GenoaScalarDivide) {
  const auto& m = Shipped("genoa");
  auto ir = Kernel(m, {"vdivsd %xmm1, %xmm2, %xmm0"});
  const auto& d = Lookup(m, ir.instructions[0]);
  EXPECT_EQ(d.latency, 13);
  EXPECT_EQ(ReciprocalThroughput(d, m), Rational(5));
}

TEST(Lookup, Unknown) {
  const auto& m = Shipped("gcs");
  auto ir = Kernel(m, {"frobnicate x0, x1"});
  EXPECT_THROW(Lookup(m, ir.instructions[0]), UnknownInstruction);
  auto other_width = Kernel(m, {"fadd d0, d1, d2"});
  EXPECT_EQ(Lookup(m, other_width.instructions[0]).form, "fadd fp64, fp64, fp64");
}

TEST(SustainedFrequency, Endpoints) {
  EXPECT_DOUBLE_EQ(SustainedFrequency(Shipped("gcs"), VectorClass::kNarrowVector, 72), 3.4e9);
  EXPECT_DOUBLE_EQ(SustainedFrequency(Shipped("gcs"), VectorClass::kScalar, 1), 3.4e9);
  EXPECT_DOUBLE_EQ(SustainedFrequency(Shipped("spr"), VectorClass::kWideVector512, 52), 2.0e9);
  EXPECT_DOUBLE_EQ(SustainedFrequency(Shipped("spr"), VectorClass::kNarrowVector, 52), 3.0e9);
  EXPECT_DOUBLE_EQ(SustainedFrequency(Shipped("genoa"), VectorClass::kWideVector512, 96), 3.1e9);
}

TEST(SustainedFrequency, InterpolatesAndClamps) {
  auto m = ParseModel(kTiny);
  EXPECT_DOUBLE_EQ(SustainedFrequency(m, VectorClass::kScalar, 1), 3e9);
  EXPECT_NEAR(SustainedFrequency(m, VectorClass::kScalar, 2), 3e9 - 1e9 / 3, 1);
  EXPECT_THROW(SustainedFrequency(m, VectorClass::kScalar, 5), Error);
}

TEST(SustainedFrequency, MonotoneInCoresAndClass) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    const auto& m = Shipped(name);
    for (int c = 1; c <= m.cores_per_chip; ++c) {
      double s = SustainedFrequency(m, VectorClass::kScalar, c);
      double n = SustainedFrequency(m, VectorClass::kNarrowVector, c);
      double w = SustainedFrequency(m, VectorClass::kWideVector512, c);
      EXPECT_GE(s, n);
      EXPECT_GE(n, w);
      if (c > 1) {
        EXPECT_LE(w, SustainedFrequency(m, VectorClass::kWideVector512, c - 1));
        EXPECT_LE(s, SustainedFrequency(m, VectorClass::kScalar, c - 1));
      }
    }
  }
}

// Peak oracle: integer instruction counts over a window of W cycles,
// feasible when every union of eligible port sets can absorb the µ-ops
// confined to it (Hall).
Rational GridPeak(const MachineModel& m, int window) {
  struct Group {
    std::vector<std::pair<std::vector<std::size_t>, Rational>> uops;
    int flops = 0;
  };
  std::vector<Group> groups;
  for (const auto& d : m.instructions) {
    if (d.form.find("mem") != std::string::npos) continue;
    int flops = d.op == OpClass::kFma ? 2 * d.dp_elements
                : (d.op == OpClass::kAdd || d.op == OpClass::kMul) ? d.dp_elements
                                                                    : 0;
    if (flops == 0) continue;
    Group g;
    for (const auto& u : d.uops) g.uops.emplace_back(u.ports, u.occupancy);
    g.flops = flops;
    bool merged = false;
    for (auto& h : groups) {
      if (h.uops == g.uops) {
        h.flops = std::max(h.flops, g.flops);
        merged = true;
      }
    }
    if (!merged) groups.push_back(g);
  }
  std::set<std::vector<std::size_t>> unions;
  for (const auto& g : groups) {
    for (const auto& [ports, occ] : g.uops) {
      std::set<std::vector<std::size_t>> next = unions;
      next.insert(ports);
      for (const auto& u : unions) {
        std::vector<std::size_t> merged;
        std::set_union(u.begin(), u.end(), ports.begin(), ports.end(), std::back_inserter(merged));
        next.insert(merged);
      }
      unions = next;
    }
  }
  int slots = window * m.issue_width;
  Rational best(0);
  std::vector<int> count(groups.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == groups.size()) {
      for (const auto& u : unions) {
        Rational load(0);
        for (std::size_t k = 0; k < groups.size(); ++k) {
          for (const auto& [ports, occ] : groups[k].uops) {
            if (std::includes(u.begin(), u.end(), ports.begin(), ports.end())) {
              load += occ * Rational(count[k]);
            }
          }
        }
        if (load > Rational(static_cast<std::int64_t>(u.size()) * window)) return;
      }
      Rational flops(0);
      for (std::size_t k = 0; k < groups.size(); ++k) flops += Rational(count[k] * groups[k].flops);
      best = std::max(best, flops / Rational(window));
      return;
    }
    int per = static_cast<int>(groups[i].uops.size());
    for (int c = 0; used + c * per <= slots; ++c) {
      count[i] = c;
      rec(i + 1, used + c * per);
    }
    count[i] = 0;
  };
  rec(0, 0);
  return best;
}

TEST(PeakFlops, MatchesGridOracle) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    const auto& m = Shipped(name);
    EXPECT_EQ(PeakFlopsPerCycle(m).flops_per_cycle, GridPeak(m, 2)) << name;
  }
}

TEST(PeakFlops, TableOne) {
  // Tflop/s at max frequency, all cores.
  EXPECT_NEAR(TheoreticalPeakFlops(Shipped("gcs"), 3.4e9, 72) / 1e12, 3.92, 0.0392);
  EXPECT_NEAR(TheoreticalPeakFlops(Shipped("spr"), 3.8e9, 52) / 1e12, 6.32, 0.0632);
  EXPECT_NEAR(TheoreticalPeakFlops(Shipped("genoa"), 3.7e9, 96) / 1e12, 8.52, 0.0852);
}

TEST(PeakFlops, NoFpFormsGivesZero) {
  auto m = ParseModel(kTiny);
  m.instructions.clear();
  m.Reindex();
  EXPECT_EQ(TheoreticalPeakFlops(m, 3e9, 4), 0.0);
}

TEST(PeakFlops, IssueWidthBinds) {
  auto m = ParseModel(kTiny);
  m.issue_width = 1;
  EXPECT_EQ(PeakFlopsPerCycle(m).flops_per_cycle, Rational(2));
  m.issue_width = 2;
  EXPECT_EQ(PeakFlopsPerCycle(m).flops_per_cycle, Rational(4));
}

TEST(ValidateModel, ShippedModelsClean) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    auto diags = ValidateModel(Shipped(name));
    EXPECT_TRUE(diags.empty()) << name << ": " << (diags.empty() ? "" : diags.front());
  }
}

TEST(ValidateModel, InjectedFmaLatency) {
  MachineModel m = Shipped("gcs");
  for (auto& d : m.instructions) {
    if (d.form == "fmla pred, vec128, vec128, vec128") d.latency = 5;
  }
  m.Reindex();
  EXPECT_EQ(ValidateModel(m).size(), 1u);
}

}  // namespace
}  // namespace incore
