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

#include "incore/cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "incore/asm.h"
#include "incore/dep_graph.h"
#include "incore/errors.h"
#include "incore/harness.h"
#include "incore/machine_model.h"
#include "incore/port_scheduler.h"
#include "incore/predictor.h"
#include "incore/wa_traffic.h"

namespace incore {
namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct AnalyzeArgs {
  std::string arch;
  std::string file;
  std::string dialect;
  std::string id;
  std::optional<int> cores;
  std::string format = "text";
  bool dump_ir = false;
  bool dump_deps = false;
  std::optional<double> flops;
  double load_bytes = 0;
  double store_bytes = 0;
  std::string stores = "standard";
};

int Analyze(const AnalyzeArgs& a, std::ostream& out) {
  MachineModel model = LoadModel(a.arch);
  Dialect dialect = model.isa;
  if (!a.dialect.empty()) {
    auto d = ParseDialect(a.dialect);
    if (!d) throw Error("unknown dialect '" + a.dialect + "'");
    if (*d != model.isa) {
      throw Error("dialect " + a.dialect + " does not match model " + model.name + " (" +
                  std::string(DialectName(model.isa)) + ")");
    }
    dialect = *d;
  }
  ParseOptions options;
  if (dialect == Dialect::kAArch64) options.sve_vector_bytes = model.simd_bytes;
  KernelIR ir = ParseListing(ReadText(a.file), dialect, options);
  std::string id = a.id.empty() ? std::filesystem::path(a.file).stem().string() : a.id;

  if (a.dump_ir) {
    out << DumpIr(ir);
    return 0;
  }
  if (a.dump_deps) {
    out << DumpDeps(BuildGraph(ir, model));
    return 0;
  }
  PredictionReport rep = Predict(ir, model);
  if (a.cores) AttachTime(&rep, model, *a.cores);
  if (a.format == "tsv") {
    out << TsvHeader() << FormatReportTsv(rep, id);
    return 0;
  }
  out << FormatReportText(rep, ir, model, id);
  if (a.flops) {
    int cores = a.cores.value_or(model.cores_per_chip);
    WAMode mode = a.stores == "nt" ? NonTemporalStoreMode(model) : StandardStoreMode(model);
    TrafficSpec spec{a.load_bytes, a.store_bytes, a.stores != "partial"};
    double bytes = EffectiveTraffic(spec, mode, model, cores);
    RooflineEstimate e = Roofline(rep, *a.flops, bytes, model, cores);
    out << "\nroofline (" << cores << " cores, stores " << a.stores << ", "
        << FormatWAMode(spec.streaming ? mode : WAMode{}) << "):\n";
    out << "  bytes/iter:  " << FormatSig(e.bytes_per_iter) << "\n";
    out << "  intensity:   " << FormatSig(e.intensity) << " flop/B\n";
    out << "  p_core:      " << FormatSig(e.p_core / 1e9) << " Gflop/s\n";
    out << "  p_mem:       " << FormatSig(e.p_mem / 1e9) << " Gflop/s\n";
    out << "  p_roof:      " << FormatSig(e.p_roof / 1e9) << " Gflop/s ("
        << (e.memory_bound ? "memory" : "core") << " bound)\n";
  }
  return 0;
}

int Validate(const std::string& arch, const std::string& corpus, const std::string& meas,
             std::ostream& out, std::ostream& err) {
  MachineModel model = LoadModel(arch);
  auto measurements = LoadMeasurements(meas);
  ValidationResult r = RunCorpus(corpus, measurements, model);
  out << FormatValidation(r);
  for (const auto& f : r.failures) err << "error: " << f << "\n";
  return r.failures.empty() ? 0 : 1;
}

int ModelShow(const std::string& arch, std::ostream& out) {
  MachineModel m = LoadModel(arch);
  PeakMix peak = PeakFlopsPerCycle(m);
  out << "name:        " << m.name << "\n";
  out << "isa:         " << DialectName(m.isa) << "\n";
  out << "ports:       " << m.ports.size() << " (";
  for (std::size_t i = 0; i < m.ports.size(); ++i) out << (i ? " " : "") << m.ports[i];
  out << ")\n";
  out << "issue width: " << m.issue_width << "\n";
  out << "simd bytes:  " << m.simd_bytes << "\n";
  out << "cores:       " << m.cores_per_chip << "\n";
  out << "peak:        " << FormatSig(ToDouble(peak.flops_per_cycle)) << " flop/cy/core, "
      << FormatSig(TheoreticalPeakFlops(m, m.max_freq, m.cores_per_chip) / 1e12)
      << " Tflop/s at " << FormatSig(m.max_freq / 1e9) << " GHz\n";
  for (const auto& [form, rate] : peak.mix) {
    out << "  mix:       " << form << " x " << ToString(rate) << "/cy\n";
  }
  out << "\nform\tuops\tlatency\trecip_tp\n";
  for (const auto& d : m.instructions) {
    std::string uops;
    for (const auto& u : d.uops) {
      std::string ports;
      for (std::size_t p : u.ports) ports += (ports.empty() ? "" : "|") + m.ports[p];
      uops += (uops.empty() ? "" : " ") + std::string("{") + ports + "}:" + ToString(u.occupancy);
    }
    out << d.form << "\t" << uops << "\t" << d.latency << "\t"
        << ToString(ReciprocalThroughput(d, m)) << "\n";
  }
  return 0;
}

int ModelCheck(const std::string& arch, std::ostream& out) {
  MachineModel m = LoadModel(arch);
  auto diags = ValidateModel(m);
  for (const auto& d : diags) out << d << "\n";
  if (diags.empty()) out << m.name << ": ok\n";
  return diags.empty() ? 0 : 1;
}

int WaRatios(const std::string& arch, const std::string& mode_text, const std::string& compare,
             std::ostream& out) {
  MachineModel m = LoadModel(arch);
  WAMode mode = mode_text.empty() ? StandardStoreMode(m) : ParseWAMode(mode_text);
  out << "# " << m.name << " " << FormatWAMode(mode) << "\n";
  out << "cores\tratio\n";
  for (int c = 1; c <= m.cores_per_chip; ++c) {
    out << c << "\t" << FormatSig(TrafficRatio(mode, m, c)) << "\n";
  }
  if (!compare.empty()) {
    out << "\ncurve\tpoints\tmax_abs_deviation\n";
    for (const auto& curve : LoadRatioCurves(compare)) {
      out << curve.name << "\t" << curve.points.size() << "\t"
          << FormatSig(MaxAbsDeviation(curve, mode, m)) << "\n";
    }
  }
  return 0;
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Static in-core performance analyzer for assembly loop kernels", "incore"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Predict cycles/iteration of one kernel");
  analyze->add_option("--arch", an.arch, "Machine model file")->required();
  analyze->add_option("--file", an.file, "Assembly listing with LOOP-BEGIN/LOOP-END markers")
      ->required();
  analyze->add_option("--dialect", an.dialect, "aarch64 or x86-att (default: model ISA)");
  analyze->add_option("--id", an.id, "Kernel id for reports (default: file stem)");
  analyze->add_option("--cores", an.cores, "Active cores, for time/iteration")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--format", an.format, "text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  analyze->add_flag("--dump-ir", an.dump_ir, "Print the normalized IR and exit");
  analyze->add_flag("--dump-deps", an.dump_deps, "Print dependency edges and exit");
  analyze->add_option("--flops", an.flops, "DP flops per iteration, enables Roofline");
  analyze->add_option("--load-bytes", an.load_bytes, "Bytes loaded per iteration");
  analyze->add_option("--store-bytes", an.store_bytes, "Bytes stored per iteration");
  analyze->add_option("--stores", an.stores, "standard, nt or partial")
      ->check(CLI::IsMember({"standard", "nt", "partial"}));

  std::string v_arch, v_corpus, v_meas;
  auto* validate = app.add_subcommand("validate", "Run a corpus against measurements");
  validate->add_option("--arch", v_arch, "Machine model file")->required();
  validate->add_option("--corpus", v_corpus, "Directory of <kernel_id>.s fixtures")->required();
  validate->add_option("--measurements", v_meas, "Measurement TSV")->required();

  std::string m_arch;
  auto* model = app.add_subcommand("model", "Inspect a machine model");
  model->require_subcommand(1);
  auto* show = model->add_subcommand("show", "Summarize the model");
  show->add_option("--arch", m_arch, "Machine model file")->required();
  auto* check = model->add_subcommand("check", "Compare against reference throughput/latency");
  check->add_option("--arch", m_arch, "Machine model file")->required();

  std::string w_arch, w_mode, w_compare;
  auto* wa = app.add_subcommand("wa", "Write-allocate traffic ratios");
  wa->require_subcommand(1);
  auto* ratios = wa->add_subcommand("ratios", "Traffic ratio per active core count");
  ratios->add_option("--arch", w_arch, "Machine model file")->required();
  ratios->add_option("--mode", w_mode, "full-wa, auto-evasion, speci2m:R, nt-perfect, nt-residual:R");
  ratios->add_option("--compare", w_compare, "Measured ratio TSV (cores, one column per curve)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*analyze) return Analyze(an, out);
    if (*validate) return Validate(v_arch, v_corpus, v_meas, out, err);
    if (*show) return ModelShow(m_arch, out);
    if (*check) return ModelCheck(m_arch, out);
    if (*ratios) return WaRatios(w_arch, w_mode, w_compare, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace incore
