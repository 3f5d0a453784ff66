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

// Validation harness: predicts a corpus of kernels, compares against
// measured cycles and summarizes the relative prediction errors (RPE).

#ifndef INCORE_HARNESS_H_
#define INCORE_HARNESS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "incore/machine_model.h"
#include "incore/rational.h"

namespace incore {

struct Measurement {
  std::string kernel_id;
  std::string compiler;
  std::string flags;
  Rational measured_cy_per_iter{1};
};

// Header-led TSV: kernel_id, compiler, flags, measured_cy_per_iter.
std::vector<Measurement> ParseMeasurements(std::string_view tsv,
                                           const std::string& source = "<measurements>");
std::vector<Measurement> LoadMeasurements(const std::string& path);

// Half-open buckets [k*w, (k+1)*w) plus a collector for RPE <= -1.
struct Histogram {
  double width = 0.1;
  int collector = 0;
  std::map<long, int> buckets;  // k -> count; always holds the default range
  int Total() const;
};

// Bucket of one RPE value; values within 1e-9 of a bucket edge snap to it.
long BucketIndex(double rpe, double width);

Histogram MakeHistogram(const std::vector<double>& errors, double width = 0.1);

// "bucket_low\tcount" rows, collector first as "-inf".
std::string FormatHistogram(const Histogram& h);

struct Summary {
  int n = 0;
  double pct_within_10 = 0;   // share with 0 <= RPE < 0.1, in percent
  double pct_within_20 = 0;   // share with 0 <= RPE < 0.2
  double mean_rpe_underpredictions = 0;  // mean over RPE > 0; 0 if none
  double mean_abs_rpe = 0;
};

Summary Summarize(const std::vector<double>& errors);

std::string FormatSummary(const Summary& s);

struct CorpusEntry {
  Measurement m;
  double predicted = 0;
  double rpe = 0;
  std::string bottleneck;
};

struct ValidationResult {
  std::vector<CorpusEntry> entries;  // sorted by (kernel_id, compiler, flags)
  std::vector<std::string> failures;  // "<kernel_id>: <message>"
  Histogram histogram;
  Summary summary;
};

// Each kernel_id names <corpus_dir>/<kernel_id>.s in the model's dialect.
ValidationResult RunCorpus(const std::string& corpus_dir,
                           const std::vector<Measurement>& measurements,
                           const MachineModel& model);

// Per-kernel TSV, blank line, histogram, blank line, summary.
std::string FormatValidation(const ValidationResult& r);

// Reads back the RPE column of the per-kernel block of FormatValidation.
std::vector<double> ParseValidationErrors(std::string_view report);

}  // namespace incore

#endif  // INCORE_HARNESS_H_
