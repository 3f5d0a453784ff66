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

#include "incore/port_scheduler.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "incore/errors.h"
#include "test_util.h"

namespace incore {
namespace {

using testing::Kernel;
using testing::Shipped;

// Max over port subsets S of (occupancy confined to S) / |S|.
double DensityOracle(const std::vector<UopDemand>& uops, std::size_t num_ports) {
  double best = 0;
  for (unsigned s = 1; s < (1u << num_ports); ++s) {
    double load = 0;
    for (const auto& u : uops) {
      bool inside = std::all_of(u.ports.begin(), u.ports.end(),
                                [&](std::size_t p) { return (s >> p) & 1u; });
      if (inside) load += ToDouble(u.occupancy);
    }
    best = std::max(best, load / __builtin_popcount(s));
  }
  return best;
}

// Exhaustive search over assignments on a 1/steps grid.
double GridOracle(const std::vector<UopDemand>& uops, std::size_t num_ports, int steps) {
  double best = 1e300;
  std::vector<double> load(num_ports, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == uops.size()) {
      best = std::min(best, *std::max_element(load.begin(), load.end()));
      return;
    }
    const auto& u = uops[i];
    double occ = ToDouble(u.occupancy);
    std::vector<int> parts(u.ports.size(), 0);
    std::function<void(std::size_t, int)> split = [&](std::size_t k, int left) {
      if (k + 1 == parts.size()) {
        parts[k] = left;
        for (std::size_t j = 0; j < parts.size(); ++j) load[u.ports[j]] += occ * parts[j] / steps;
        rec(i + 1);
        for (std::size_t j = 0; j < parts.size(); ++j) load[u.ports[j]] -= occ * parts[j] / steps;
        return;
      }
      for (int x = 0; x <= left; ++x) {
        parts[k] = x;
        split(k + 1, left - x);
      }
    };
    split(0, steps);
  };
  rec(0);
  return best;
}

std::vector<UopDemand> RandomInstance(std::mt19937& rng, std::size_t* num_ports) {
  static const Rational kOcc[] = {Rational(1, 2), Rational(1), Rational(2), Rational(5)};
  *num_ports = 1 + rng() % 4;
  std::size_t n = 1 + rng() % 6;
  std::vector<UopDemand> uops(n);
  for (auto& u : uops) {
    unsigned mask = 0;
    while (mask == 0) mask = rng() % (1u << *num_ports);
    for (std::size_t p = 0; p < *num_ports; ++p) {
      if ((mask >> p) & 1u) u.ports.push_back(p);
    }
    u.occupancy = kOcc[rng() % 4];
  }
  return uops;
}

void ExpectValidSchedule(const std::vector<UopDemand>& uops, std::size_t num_ports,
                         const Schedule& s) {
  ASSERT_EQ(s.port_load.size(), num_ports);
  ASSERT_EQ(s.shares.size(), uops.size());
  std::vector<Rational> load(num_ports, Rational(0));
  for (std::size_t i = 0; i < uops.size(); ++i) {
    Rational sum(0);
    for (const auto& sh : s.shares[i]) {
      EXPECT_TRUE(std::find(uops[i].ports.begin(), uops[i].ports.end(), sh.port) !=
                  uops[i].ports.end());
      EXPECT_GT(sh.fraction, Rational(0));
      sum += sh.fraction;
      load[sh.port] += sh.fraction * uops[i].occupancy;
    }
    EXPECT_EQ(sum, Rational(1));
  }
  EXPECT_EQ(load, s.port_load);
  Rational mx(0);
  for (const auto& l : load) mx = std::max(mx, l);
  EXPECT_EQ(mx, s.t);
}

TEST(MinMaxAssign, DensityOracleAgreesWithGrid) {
  std::mt19937 rng(7);
  int checked = 0;
  while (checked < 200) {
    std::size_t ports = 0;
    auto uops = RandomInstance(rng, &ports);
    if (ports > 3) continue;
    uops.resize(std::min<std::size_t>(uops.size(), ports == 3 ? 2 : 3));
    // Rounding the optimum onto the grid moves any port load by at most
    // the total occupancy / steps.
    double slack = 0;
    for (const auto& u : uops) slack += ToDouble(u.occupancy) / 60;
    double density = DensityOracle(uops, ports), grid = GridOracle(uops, ports, 60);
    EXPECT_LE(density, grid + 1e-9);
    EXPECT_LE(grid, density + slack + 1e-9);
    ++checked;
  }
}

TEST(MinMaxAssign, RandomInstancesMatchOracle) {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t ports = 0;
    auto uops = RandomInstance(rng, &ports);
    Schedule s = MinMaxAssign(uops, ports);
    ASSERT_NEAR(ToDouble(s.t), DensityOracle(uops, ports), 1e-6) << "trial " << trial;
    ExpectValidSchedule(uops, ports, s);
  }
}

TEST(MinMaxAssign, Properties) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t ports = 0;
    auto uops = RandomInstance(rng, &ports);
    Rational t = MinMaxAssign(uops, ports).t;

    auto more = uops;
    std::size_t extra_ports = 0;
    more.push_back(RandomInstance(rng, &extra_ports).front());
    std::size_t more_ports = ports;
    for (const auto& u : more) more_ports = std::max(more_ports, u.ports.back() + 1);
    EXPECT_GE(MinMaxAssign(more, more_ports).t, MinMaxAssign(uops, more_ports).t);

    auto scaled = uops;
    Rational k(3, 2);
    for (auto& u : scaled) u.occupancy *= k;
    EXPECT_EQ(MinMaxAssign(scaled, ports).t, t * k);

    auto shuffled = uops;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Schedule a = MinMaxAssign(uops, ports), b = MinMaxAssign(shuffled, ports);
    EXPECT_EQ(a.t, b.t);
    auto la = a.port_load, lb = b.port_load;
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    EXPECT_EQ(la, lb);
  }
}

TEST(MinMaxAssign, Examples) {
  EXPECT_EQ(MinMaxAssign({{{0}, Rational(1)}}, 1).t, Rational(1));
  auto s = MinMaxAssign({{{0, 1}, Rational(1)}, {{0, 1}, Rational(1)}, {{0}, Rational(1)}}, 2);
  EXPECT_EQ(s.t, Rational(3, 2));
  EXPECT_EQ(DensityOracle({{{0, 1}, Rational(1)}, {{0, 1}, Rational(1)}, {{0}, Rational(1)}}, 2),
            1.5);
  EXPECT_EQ(MinMaxAssign({}, 3).t, Rational(0));
}

TEST(MinMaxAssign, CanonicalLoads) {
  // Per-port loads are the unique level solution regardless of input order.
  auto s = MinMaxAssign({{{0}, Rational(2)}, {{0, 1, 2}, Rational(1)}, {{1, 2}, Rational(1)}}, 3);
  EXPECT_EQ(s.t, Rational(2));
  EXPECT_EQ(s.port_load, (std::vector<Rational>{Rational(2), Rational(1), Rational(1)}));
}

TEST(MinMaxAssign, RejectsBadInput) {
  EXPECT_THROW(MinMaxAssign({{{}, Rational(1)}}, 2), InternalError);
  EXPECT_THROW(MinMaxAssign({{{0}, Rational(0)}}, 2), InternalError);
  EXPECT_THROW(MinMaxAssign({{{3}, Rational(1)}}, 2), InternalError);
}

TEST(PortPressure, FourGcsFmas) {
  const auto& m = Shipped("gcs");
  auto ir = Kernel(m, {"fmla z0.d, p0/m, z4.d, z5.d", "fmla z1.d, p0/m, z4.d, z5.d",
                       "fmla z2.d, p0/m, z4.d, z5.d", "fmla z3.d, p0/m, z4.d, z5.d"});
  auto r = PortPressure(ir, m);
  EXPECT_EQ(r.t_port, Rational(1));
  EXPECT_EQ(r.ports, m.ports);
  EXPECT_EQ(r.assignment.size(), 4u);
  // 4 instructions x 2 DP elements per cycle.
  EXPECT_EQ(Rational(8) / r.t_port, Rational(8));
}

TEST(PortPressure, SingleInstructionEqualsReciprocalThroughput) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    const auto& m = Shipped(name);
    for (const auto& d : m.instructions) {
      std::vector<UopDemand> uops;
      for (const auto& u : d.uops) uops.push_back({u.ports, u.occupancy});
      EXPECT_NEAR(ToDouble(ReciprocalThroughput(d, m)),
                  std::max(DensityOracle(uops, m.ports.size()),
                           ToDouble(Rational(static_cast<std::int64_t>(d.uops.size()),
                                             m.issue_width))),
                  1e-9)
          << name << " " << d.form;
    }
  }
}

TEST(IssueBound, Examples) {
  const auto& m = Shipped("gcs");
  std::initializer_list<std::string> eight = {
      "add x0, x0, #1", "add x1, x1, #1", "add x2, x2, #1", "add x3, x3, #1",
      "add x4, x4, #1", "add x5, x5, #1", "add x6, x6, #1", "add x7, x7, #1"};
  EXPECT_EQ(IssueBound(Kernel(m, eight), m), Rational(1));
  auto twelve = Kernel(m, eight);
  auto four = Kernel(m, {"add x8, x8, #1", "add x9, x9, #1", "add x10, x10, #1",
                         "add x11, x11, #1"});
  twelve.instructions.insert(twelve.instructions.end(), four.instructions.begin(),
                             four.instructions.end());
  EXPECT_EQ(IssueBound(twelve, m), Rational(3, 2));
  EXPECT_EQ(IssueBound(KernelIR{}, m), Rational(0));
}

TEST(PortPressure, UnknownInstructionPropagates) {
  const auto& m = Shipped("gcs");
  EXPECT_THROW(PortPressure(Kernel(m, {"frobnicate x0, x1"}), m), UnknownInstruction);
}

}  // namespace
}  // namespace incore
