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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "incore/asm.h"
#include "incore/cli.h"
#include "incore/errors.h"
#include "incore/harness.h"
#include "incore/machine_model.h"
#include "incore/predictor.h"
#include "incore/wa_traffic.h"

namespace py = pybind11;

namespace incore {
namespace {

py::object Fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.numerator(), r.denominator());
}

VectorClass VClass(const std::string& name) {
  auto v = ParseVectorClass(name);
  if (!v) throw Error("unknown vector class '" + name + "'");
  return *v;
}

KernelIR Parse(const std::string& listing, const MachineModel& model) {
  ParseOptions options;
  if (model.isa == Dialect::kAArch64) options.sve_vector_bytes = model.simd_bytes;
  return ParseListing(listing, model.isa, options);
}

py::dict Analyze(const std::string& listing, const MachineModel& model,
                 std::optional<int> cores) {
  PredictionReport r = Predict(Parse(listing, model), model);
  if (cores) AttachTime(&r, model, *cores);
  py::dict d;
  d["t_port"] = Fraction(r.t_port);
  d["t_issue"] = Fraction(r.t_issue);
  d["lcd"] = Fraction(r.lcd);
  d["prediction"] = Fraction(r.prediction);
  d["bottleneck"] = std::string(BottleneckName(r.bottleneck));
  d["critical_path"] = r.critical_path;
  d["vector_class"] = std::string(VectorClassName(r.vclass));
  d["time_per_iter"] = r.time_per_iter ? py::cast(*r.time_per_iter) : py::none();
  d["diagnostics"] = r.diagnostics;
  return d;
}

py::dict RooflineDict(const RooflineEstimate& e) {
  py::dict d;
  d["intensity"] = e.intensity;
  d["p_core"] = e.p_core;
  d["p_mem"] = e.p_mem;
  d["p_roof"] = e.p_roof;
  d["ridge_intensity"] = e.ridge_intensity;
  d["memory_bound"] = e.memory_bound;
  return d;
}

py::tuple Cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"incore"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = CliMain(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace incore

PYBIND11_MODULE(_incore, m) {
  using namespace incore;
  m.doc() = "Static in-core performance model for loop kernels";

  auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<UnknownInstruction>(m, "UnknownInstruction", error.ptr());

  py::class_<MachineModel>(m, "MachineModel")
      .def_readonly("name", &MachineModel::name)
      .def_property_readonly("isa", [](const MachineModel& mm) { return std::string(DialectName(mm.isa)); })
      .def_readonly("ports", &MachineModel::ports)
      .def_readonly("issue_width", &MachineModel::issue_width)
      .def_readonly("simd_bytes", &MachineModel::simd_bytes)
      .def_readonly("cores_per_chip", &MachineModel::cores_per_chip)
      .def_readonly("max_freq", &MachineModel::max_freq)
      .def("peak_flops_per_cycle",
           [](const MachineModel& mm) { return Fraction(PeakFlopsPerCycle(mm).flops_per_cycle); })
      .def("theoretical_peak_flops", &TheoreticalPeakFlops, py::arg("freq_hz"), py::arg("cores"))
      .def("sustained_frequency",
           [](const MachineModel& mm, const std::string& vclass, int cores) {
             return SustainedFrequency(mm, VClass(vclass), cores);
           },
           py::arg("vector_class"), py::arg("cores"))
      .def("validate", &ValidateModel)
      .def("serialize", &SerializeModel)
      .def("__repr__", [](const MachineModel& mm) { return "<MachineModel " + mm.name + ">"; });

  m.def("load_model", &LoadModel, py::arg("path"));
  m.def("parse_model", [](const std::string& text) { return ParseModel(text); }, py::arg("text"));
  m.def("analyze", &Analyze, py::arg("listing"), py::arg("model"), py::arg("cores") = py::none(),
        "Predict cycles per iteration of the marked loop in an assembly listing.");
  m.def("dump_ir", [](const std::string& listing, const MachineModel& mm) {
    return DumpIr(Parse(listing, mm));
  });
  m.def("traffic_ratio",
        [](const std::string& mode, const MachineModel& mm, int cores) {
          return TrafficRatio(ParseWAMode(mode), mm, cores);
        },
        py::arg("mode"), py::arg("model"), py::arg("cores"));
  m.def("relative_prediction_error", &RelativePredictionError, py::arg("predicted"),
        py::arg("measured"));
  m.def("roofline",
        [](double flops, double bytes, double p_core, double bandwidth) {
          return RooflineDict(CombineRoofline(flops, bytes, p_core, bandwidth));
        },
        py::arg("flops_per_iter"), py::arg("bytes_per_iter"), py::arg("p_core"),
        py::arg("bandwidth"));
  m.def("histogram",
        [](const std::vector<double>& errors, double width) {
          Histogram h = MakeHistogram(errors, width);
          return py::make_tuple(h.collector, h.buckets);
        },
        py::arg("errors"), py::arg("width") = 0.1);
  m.def("summarize", [](const std::vector<double>& errors) {
    Summary s = Summarize(errors);
    py::dict d;
    d["n"] = s.n;
    d["pct_within_10"] = s.pct_within_10;
    d["pct_within_20"] = s.pct_within_20;
    d["mean_rpe_underpredictions"] = s.mean_rpe_underpredictions;
    d["mean_abs_rpe"] = s.mean_abs_rpe;
    return d;
  });
  m.def("cli", &Cli, py::arg("args"), "Run the command line tool; returns (code, stdout, stderr).");
}
