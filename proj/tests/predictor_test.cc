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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "incore/errors.h"
#include "incore/wa_traffic.h"
#include "test_util.h"

namespace incore {
namespace {

using testing::Kernel;
using testing::Shipped;

PredictionReport PredictOn(const std::string& model, std::initializer_list<std::string> lines) {
  const auto& m = Shipped(model);
  return Predict(Kernel(m, lines), m);
}

TEST(Predict, SelfRecurrentFma) {
  auto r = PredictOn("gcs", {"fmla z0.d, p0/m, z1.d, z2.d"});
  EXPECT_EQ(r.prediction, Rational(4));
  EXPECT_EQ(r.bottleneck, Bottleneck::kLcd);
}

TEST(Predict, FourIndependentFmas) {
  // Non-destructive scalar FMAs: no recurrence, four FP ports.
  auto r = PredictOn("gcs", {"fmadd d0, d4, d5, d6", "fmadd d1, d4, d5, d6",
                             "fmadd d2, d4, d5, d6", "fmadd d3, d4, d5, d6"});
  EXPECT_EQ(r.prediction, Rational(1));
  EXPECT_EQ(r.bottleneck, Bottleneck::kPort);
  // Vector FMAs accumulate into their destination, so each carries its latency.
  auto v = PredictOn("gcs", {"fmla z0.d, p0/m, z4.d, z5.d", "fmla z1.d, p0/m, z4.d, z5.d",
                             "fmla z2.d, p0/m, z4.d, z5.d", "fmla z3.d, p0/m, z4.d, z5.d"});
  EXPECT_EQ(v.t_port, Rational(1));
  EXPECT_EQ(v.lcd, Rational(4));
  EXPECT_EQ(v.prediction, Rational(4));
}

TEST(Predict, EmptyKernel) {
  const auto& m = Shipped("gcs");
  auto r = Predict(KernelIR{}, m);
  EXPECT_EQ(r.prediction, Rational(0));
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Predict, GaussSeidelNote) {
  const auto& m = Shipped("gcs");
  auto ir = ParseListing(testing::ReadAll(testing::SourcePath("corpus/aarch64/gs2d5pt.s")),
                         Dialect::kAArch64);
  auto r = Predict(ir, m);
  EXPECT_EQ(r.bottleneck, Bottleneck::kLcd);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_NE(r.diagnostics.back().find("Gauss-Seidel"), std::string::npos);
}

TEST(Predict, PredictionIsMaxOfBounds) {
  for (const char* name : {"gcs", "spr", "genoa"}) {
    const auto& m = Shipped(name);
    std::string dir = m.isa == Dialect::kAArch64 ? "aarch64" : "x86";
    for (const char* k : testing::kKernels) {
      auto ir = ParseListing(testing::ReadAll(testing::SourcePath("corpus/" + dir + "/" + k + ".s")),
                             m.isa, {m.simd_bytes});
      auto r = Predict(ir, m);
      EXPECT_EQ(r.prediction, std::max({r.t_port, r.t_issue, r.lcd})) << name << " " << k;
      EXPECT_EQ(r.bottleneck, PickBottleneck(r.t_port, r.t_issue, r.lcd));
      EXPECT_GT(r.prediction, Rational(0));
    }
  }
}

TEST(PickBottleneck, TieOrder) {
  Rational one(1), two(2);
  EXPECT_EQ(PickBottleneck(one, one, one), Bottleneck::kPort);
  EXPECT_EQ(PickBottleneck(one, two, two), Bottleneck::kIssue);
  EXPECT_EQ(PickBottleneck(one, one, two), Bottleneck::kLcd);
  EXPECT_EQ(PickBottleneck(two, one, two), Bottleneck::kPort);
}

TEST(PickBottleneck, NamesAnArgmax) {
  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Rational b[3] = {Rational(rng() % 6, 1 + rng() % 3), Rational(rng() % 6, 1 + rng() % 3),
                     Rational(rng() % 6, 1 + rng() % 3)};
    Rational mx = std::max({b[0], b[1], b[2]});
    auto pick = static_cast<int>(PickBottleneck(b[0], b[1], b[2]));
    EXPECT_EQ(b[pick], mx);
    for (int k = 0; k < pick; ++k) EXPECT_LT(b[k], mx);
  }
}

TEST(InferVectorClass, WidestRegister) {
  EXPECT_EQ(InferVectorClass(Kernel(Shipped("gcs"), {"fadd z0.d, z1.d, z2.d"})),
            VectorClass::kNarrowVector);
  EXPECT_EQ(InferVectorClass(Kernel(Shipped("gcs"), {"fadd d0, d1, d2"})), VectorClass::kScalar);
  EXPECT_EQ(InferVectorClass(Kernel(Shipped("spr"), {"vaddpd %ymm1, %ymm2, %ymm0",
                                                      "vaddpd %zmm1, %zmm2, %zmm0"})),
            VectorClass::kWideVector512);
  EXPECT_EQ(InferVectorClass(Kernel(Shipped("spr"), {"vaddpd %ymm1, %ymm2, %ymm0"})),
            VectorClass::kNarrowVector);
  EXPECT_EQ(InferVectorClass(Kernel(Shipped("spr"), {"vaddsd %xmm1, %xmm2, %xmm0"})),
            VectorClass::kScalar);
}

TEST(CyclesToTime, Examples) {
  EXPECT_NEAR(CyclesToTime(2, Shipped("gcs"), VectorClass::kNarrowVector, 72), 2 / 3.4e9, 1e-21);
  EXPECT_DOUBLE_EQ(CyclesToTime(2, Shipped("spr"), VectorClass::kWideVector512, 52), 1e-9);
  EXPECT_EQ(CyclesToTime(0, Shipped("spr"), VectorClass::kScalar, 1), 0.0);
  EXPECT_THROW(CyclesToTime(-1, Shipped("spr"), VectorClass::kScalar, 1), Error);
}

TEST(AttachTime, UsesInferredClass) {
  const auto& m = Shipped("spr");
  auto r = Predict(Kernel(m, {"vaddpd %zmm1, %zmm2, %zmm0", "vaddpd %zmm1, %zmm2, %zmm3"}), m);
  AttachTime(&r, m, 52);
  ASSERT_TRUE(r.time_per_iter);
  EXPECT_DOUBLE_EQ(*r.time_per_iter, ToDouble(r.prediction) / 2.0e9);
}

TEST(RelativePredictionError, Examples) {
  EXPECT_DOUBLE_EQ(RelativePredictionError(8, 10), 0.2);
  EXPECT_DOUBLE_EQ(RelativePredictionError(10, 10), 0.0);
  EXPECT_DOUBLE_EQ(RelativePredictionError(25, 10), -1.5);
  EXPECT_THROW(RelativePredictionError(1, 0), Error);
  EXPECT_THROW(RelativePredictionError(1, -2), Error);
}

TEST(RelativePredictionError, SignMeansFasterPrediction) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(0.1, 100);
  for (int i = 0; i < 1000; ++i) {
    double p = d(rng), m = d(rng);
    EXPECT_EQ(RelativePredictionError(p, m) > 0, p < m);
  }
}

TEST(CombineRoofline, MinLawRandomized) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> logu(-3, 3);
  for (int i = 0; i < 5000; ++i) {
    double flops = std::pow(10, logu(rng)), bytes = std::pow(10, logu(rng));
    double p_core = 1e9 * std::pow(10, logu(rng)), bw = 1e9 * std::pow(10, logu(rng));
    auto e = CombineRoofline(flops, bytes, p_core, bw);
    EXPECT_DOUBLE_EQ(e.intensity, flops / bytes);
    EXPECT_DOUBLE_EQ(e.p_roof, std::min(p_core, flops / bytes * bw));
    EXPECT_LE(e.p_roof, e.p_core);
    EXPECT_LE(e.p_roof, e.p_mem);
    EXPECT_EQ(e.memory_bound, e.intensity < e.ridge_intensity);
    if (e.intensity < e.ridge_intensity * (1 - 1e-9)) {
      EXPECT_EQ(e.p_roof, e.p_mem);
    }
    if (e.intensity > e.ridge_intensity * (1 + 1e-9)) {
      EXPECT_EQ(e.p_roof, e.p_core);
    }
  }
}

TEST(CombineRoofline, FlipsAtRidge) {
  // Powers of two keep every quotient exact.
  double p_core = 64e9, bw = 16e9;  // ridge = 4 flop/B
  auto at = CombineRoofline(32, 8, p_core, bw);
  EXPECT_EQ(at.intensity, at.ridge_intensity);
  EXPECT_FALSE(at.memory_bound);
  EXPECT_EQ(at.p_roof, p_core);
  EXPECT_EQ(at.p_mem, p_core);
  auto below = CombineRoofline(std::nextafter(32.0, 0.0), 8, p_core, bw);
  EXPECT_TRUE(below.memory_bound);
  auto above = CombineRoofline(std::nextafter(32.0, 64.0), 8, p_core, bw);
  EXPECT_FALSE(above.memory_bound);
}

TEST(CombineRoofline, Limits) {
  auto compute = CombineRoofline(1e12, 1e-6, 5e9, 100e9);
  EXPECT_EQ(compute.p_roof, 5e9);
  auto zero = CombineRoofline(0, 8, 5e9, 100e9);
  EXPECT_EQ(zero.p_roof, 0.0);
  EXPECT_THROW(CombineRoofline(1, 0, 5e9, 100e9), Error);
}

TEST(Roofline, GcsTriad) {
  const auto& m = Shipped("gcs");
  auto ir = ParseListing(testing::ReadAll(testing::SourcePath("corpus/aarch64/stream_triad.s")),
                         Dialect::kAArch64);
  auto r = Predict(ir, m);
  double bytes = EffectiveTraffic({16, 8, true}, StandardStoreMode(m), m, 72);
  EXPECT_EQ(bytes, 24.0);
  auto e = Roofline(r, 2, bytes, m, 72);
  EXPECT_TRUE(e.memory_bound);
  EXPECT_DOUBLE_EQ(e.p_roof, 2.0 / 24.0 * 467e9);
  // p_core: 2 flops per prediction cycle at 3.4 GHz on 72 cores.
  EXPECT_DOUBLE_EQ(e.p_core, 2.0 / (ToDouble(r.prediction) / 3.4e9) * 72);
}

TEST(Report, TsvRow) {
  auto r = PredictOn("gcs", {"fmla z0.d, p0/m, z1.d, z2.d"});
  EXPECT_EQ(TsvHeader(), "kernel_id\tt_port\tt_issue\tlcd\tprediction\tbottleneck\n");
  EXPECT_EQ(FormatReportTsv(r, "k"), "k\t0.25\t0.125\t4\t4\tlcd\n");
}

TEST(Report, TextListsPortsInModelOrder) {
  const auto& m = Shipped("genoa");
  auto ir = Kernel(m, {"vaddpd %ymm1, %ymm2, %ymm0"});
  auto text = FormatReportText(Predict(ir, m), ir, m, "k");
  std::size_t last = 0;
  for (const auto& p : m.ports) {
    auto pos = text.find(" " + p + " ", last);
    ASSERT_NE(pos, std::string::npos) << p;
    last = pos;
  }
  EXPECT_EQ(text, FormatReportText(Predict(ir, m), ir, m, "k"));
}

}  // namespace
}  // namespace incore
