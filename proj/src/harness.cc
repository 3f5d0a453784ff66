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

#include "incore/harness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "incore/asm.h"
#include "incore/errors.h"
#include "incore/predictor.h"

namespace incore {
namespace {

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = nl + 1;
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<Measurement> ParseMeasurements(std::string_view tsv, const std::string& source) {
  std::vector<Measurement> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  bool header = false;
  int line_no = 0;
  for (auto line : Lines(tsv)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto f = SplitTabs(line);
    if (!header) {
      if (f != std::vector<std::string>{"kernel_id", "compiler", "flags",
                                        "measured_cy_per_iter"}) {
        throw ParseError(source, line_no,
                         "expected header kernel_id<TAB>compiler<TAB>flags<TAB>measured_cy_per_iter");
      }
      header = true;
      continue;
    }
    if (f.size() != 4) throw ParseError(source, line_no, "expected 4 tab-separated fields");
    auto value = ParseRational(f[3]);
    if (!value || *value <= Rational(0)) {
      throw ParseError(source, line_no, "measured_cy_per_iter must be a positive number");
    }
    if (f[0].empty()) throw ParseError(source, line_no, "empty kernel_id");
    if (!seen.emplace(f[0], f[1], f[2]).second) {
      throw ParseError(source, line_no,
                       "duplicate measurement for " + f[0] + "/" + f[1] + "/" + f[2]);
    }
    out.push_back({f[0], f[1], f[2], *value});
  }
  if (!header) throw ParseError(source, line_no, "empty measurement file");
  return out;
}

std::vector<Measurement> LoadMeasurements(const std::string& path) {
  return ParseMeasurements(ReadFile(path), path);
}

int Histogram::Total() const {
  int n = collector;
  for (const auto& [k, c] : buckets) n += c;
  return n;
}

long BucketIndex(double rpe, double width) {
  double q = rpe / width;
  double r = std::round(q);
  if (std::abs(q - r) < 1e-9) return static_cast<long>(r);
  return static_cast<long>(std::floor(q));
}

Histogram MakeHistogram(const std::vector<double>& errors, double width) {
  if (!(width > 0)) throw Error("histogram width must be positive");
  Histogram h;
  h.width = width;
  for (long k = BucketIndex(-1.0, width); k <= BucketIndex(1.0, width); ++k) h.buckets[k] = 0;
  for (double e : errors) {
    if (e <= -1.0) {
      ++h.collector;
    } else {
      ++h.buckets[BucketIndex(e, width)];
    }
  }
  return h;
}

std::string FormatHistogram(const Histogram& h) {
  std::string out = "bucket_low\tcount\n";
  out += "-inf\t" + std::to_string(h.collector) + "\n";
  for (const auto& [k, c] : h.buckets) {
    double low = k * h.width;
    if (std::abs(low) < 1e-12) low = 0;
    out += FormatSig(low) + "\t" + std::to_string(c) + "\n";
  }
  return out;
}

Summary Summarize(const std::vector<double>& errors) {
  Summary s;
  s.n = static_cast<int>(errors.size());
  if (errors.empty()) return s;
  int within10 = 0, within20 = 0, under = 0;
  double under_sum = 0, abs_sum = 0;
  for (double e : errors) {
    if (e >= 0 && BucketIndex(e, 0.1) < 1) ++within10;
    if (e >= 0 && BucketIndex(e, 0.1) < 2) ++within20;
    if (e > 0) {
      ++under;
      under_sum += e;
    }
    abs_sum += std::abs(e);
  }
  s.pct_within_10 = 100.0 * within10 / s.n;
  s.pct_within_20 = 100.0 * within20 / s.n;
  s.mean_rpe_underpredictions = under ? under_sum / under : 0.0;
  s.mean_abs_rpe = abs_sum / s.n;
  return s;
}

std::string FormatSummary(const Summary& s) {
  std::string out;
  out += "n\t" + std::to_string(s.n) + "\n";
  out += "pct_within_10\t" + FormatSig(s.pct_within_10) + "\n";
  out += "pct_within_20\t" + FormatSig(s.pct_within_20) + "\n";
  out += "mean_rpe_underpredictions\t" + FormatSig(s.mean_rpe_underpredictions) + "\n";
  out += "mean_abs_rpe\t" + FormatSig(s.mean_abs_rpe) + "\n";
  return out;
}

ValidationResult RunCorpus(const std::string& corpus_dir,
                           const std::vector<Measurement>& measurements,
                           const MachineModel& model) {
  ValidationResult r;
  std::vector<Measurement> sorted = measurements;
  std::sort(sorted.begin(), sorted.end(), [](const Measurement& a, const Measurement& b) {
    return std::tie(a.kernel_id, a.compiler, a.flags) <
           std::tie(b.kernel_id, b.compiler, b.flags);
  });
  ParseOptions options;
  if (model.isa == Dialect::kAArch64) options.sve_vector_bytes = model.simd_bytes;
  std::vector<double> errors;
  for (const auto& m : sorted) {
    try {
      std::string text = ReadFile(corpus_dir + "/" + m.kernel_id + ".s");
      KernelIR ir = ParseListing(text, model.isa, options);
      PredictionReport rep = Predict(ir, model);
      CorpusEntry e;
      e.m = m;
      e.predicted = ToDouble(rep.prediction);
      e.rpe = RelativePredictionError(e.predicted, ToDouble(m.measured_cy_per_iter));
      e.bottleneck = std::string(BottleneckName(rep.bottleneck));
      errors.push_back(e.rpe);
      r.entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      r.failures.push_back(m.kernel_id + ": " + ex.what());
    }
  }
  r.histogram = MakeHistogram(errors);
  r.summary = Summarize(errors);
  return r;
}

std::string FormatValidation(const ValidationResult& r) {
  std::string out = "kernel_id\tcompiler\tflags\tmeasured\tpredicted\trpe\tbottleneck\n";
  for (const auto& e : r.entries) {
    out += e.m.kernel_id + "\t" + e.m.compiler + "\t" + e.m.flags + "\t" +
           FormatSig(ToDouble(e.m.measured_cy_per_iter)) + "\t" + FormatSig(e.predicted) +
           "\t" + FormatSig(e.rpe) + "\t" + e.bottleneck + "\n";
  }
  out += "\n" + FormatHistogram(r.histogram);
  out += "\n" + FormatSummary(r.summary);
  return out;
}

std::vector<double> ParseValidationErrors(std::string_view report) {
  std::vector<double> out;
  bool first = true;
  for (auto line : Lines(report)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) break;
    auto f = SplitTabs(line);
    if (f.size() != 7) throw Error("malformed validation row");
    out.push_back(std::stod(f[5]));
  }
  return out;
}

}  // namespace incore
