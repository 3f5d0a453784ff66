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

#include "incore/wa_traffic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "incore/errors.h"
#include "incore/machine_model.h"

namespace incore {
namespace {

double ParseFraction(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t idx = 0;
  double v = 0;
  try {
    v = std::stod(s, &idx);
  } catch (...) {
    idx = 0;
  }
  if (idx == 0 || idx != s.size() || !(v >= 0.0 && v <= 1.0)) {
    throw Error(std::string(what) + " must be a number in [0,1], got '" + s + "'");
  }
  return v;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

}  // namespace

WAMode ParseWAMode(std::string_view text) {
  WAMode mode;
  std::string_view head = text;
  std::string_view arg;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    head = text.substr(0, colon);
    arg = text.substr(colon + 1);
  }
  auto no_arg = [&]() {
    if (!arg.empty()) throw Error("WA mode '" + std::string(head) + "' takes no argument");
  };
  if (head == "full-wa") {
    no_arg();
    mode.kind = WAKind::kFullWA;
  } else if (head == "auto-evasion") {
    no_arg();
    mode.kind = WAKind::kAutoEvasion;
  } else if (head == "nt-perfect") {
    no_arg();
    mode.kind = WAKind::kNtPerfect;
  } else if (head == "speci2m") {
    mode.kind = WAKind::kSpecI2M;
    std::string_view value = arg;
    std::string_view curve;
    if (auto at = arg.find('@'); at != std::string_view::npos) {
      value = arg.substr(0, at);
      curve = arg.substr(at + 1);
    }
    if (value.empty()) throw Error("speci2m needs a maximum reduction, e.g. speci2m:0.25");
    mode.max_reduction = ParseFraction(value, "speci2m max_reduction");
    if (!curve.empty()) {
      mode.activation.clear();
      std::size_t start = 0;
      while (start <= curve.size()) {
        auto comma = curve.find(',', start);
        if (comma == std::string_view::npos) comma = curve.size();
        auto point = curve.substr(start, comma - start);
        auto c = point.find(':');
        if (c == std::string_view::npos) throw Error("activation point must be <util>:<act>");
        double u = ParseFraction(point.substr(0, c), "activation utilization");
        double a = ParseFraction(point.substr(c + 1), "activation value");
        if (!mode.activation.empty() && u <= mode.activation.back().first) {
          throw Error("activation utilizations must be strictly increasing");
        }
        mode.activation.emplace_back(u, a);
        start = comma + 1;
      }
      for (std::size_t i = 1; i < mode.activation.size(); ++i) {
        if (mode.activation[i].second < mode.activation[i - 1].second) {
          throw Error("activation must be non-decreasing in utilization");
        }
      }
    }
  } else if (head == "nt-residual") {
    mode.kind = WAKind::kNtResidual;
    std::string_view value = arg;
    if (auto at = arg.find('@'); at != std::string_view::npos) {
      value = arg.substr(0, at);
      std::string cores(arg.substr(at + 1));
      try {
        std::size_t idx = 0;
        mode.residual_min_cores = std::stoi(cores, &idx);
        if (idx != cores.size() || mode.residual_min_cores < 1) throw Error("");
      } catch (...) {
        throw Error("nt-residual minimum core count must be a positive integer");
      }
    }
    if (value.empty()) throw Error("nt-residual needs a residual, e.g. nt-residual:0.10");
    mode.residual = ParseFraction(value, "nt-residual residual");
  } else {
    throw Error("unknown WA mode '" + std::string(text) + "'");
  }
  return mode;
}

std::string FormatWAMode(const WAMode& mode) {
  switch (mode.kind) {
    case WAKind::kFullWA: return "full-wa";
    case WAKind::kAutoEvasion: return "auto-evasion";
    case WAKind::kNtPerfect: return "nt-perfect";
    case WAKind::kSpecI2M: {
      std::string s = "speci2m:" + Num(mode.max_reduction) + "@";
      for (std::size_t i = 0; i < mode.activation.size(); ++i) {
        s += (i ? "," : "") + Num(mode.activation[i].first) + ":" +
             Num(mode.activation[i].second);
      }
      return s;
    }
    case WAKind::kNtResidual: {
      std::string s = "nt-residual:" + Num(mode.residual);
      if (mode.residual_min_cores > 1) s += "@" + std::to_string(mode.residual_min_cores);
      return s;
    }
  }
  return "full-wa";
}

WAMode StandardStoreMode(const MachineModel& machine) {
  return ParseWAMode(machine.wa_standard);
}

WAMode NonTemporalStoreMode(const MachineModel& machine) {
  return ParseWAMode(machine.wa_nontemporal);
}

double Activation(const WAMode& mode, double utilization) {
  const auto& pts = mode.activation;
  if (pts.empty()) return 1.0;
  if (utilization <= pts.front().first) return pts.front().second;
  if (utilization >= pts.back().first) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (utilization <= pts[i].first) {
      auto [u0, a0] = pts[i - 1];
      auto [u1, a1] = pts[i];
      return a0 + (utilization - u0) / (u1 - u0) * (a1 - a0);
    }
  }
  return pts.back().second;
}

double TrafficRatio(const WAMode& mode, const MachineModel& machine, int active_cores) {
  if (active_cores < 1 || active_cores > machine.cores_per_chip) {
    throw Error("active cores " + std::to_string(active_cores) + " outside [1, " +
                std::to_string(machine.cores_per_chip) + "]");
  }
  switch (mode.kind) {
    case WAKind::kFullWA: return 2.0;
    case WAKind::kAutoEvasion:
    case WAKind::kNtPerfect: return 1.0;
    case WAKind::kNtResidual:
      return active_cores < mode.residual_min_cores ? 1.0 : 1.0 + mode.residual;
    case WAKind::kSpecI2M: {
      // Cores fill one ccNUMA domain first.
      int domain = std::max(1, machine.numa_domain_cores);
      double util = static_cast<double>(std::min(active_cores, domain)) / domain;
      return 2.0 - mode.max_reduction * Activation(mode, util);
    }
  }
  return 2.0;
}

double EffectiveTraffic(const TrafficSpec& spec, const WAMode& mode,
                        const MachineModel& machine, int active_cores) {
  if (spec.load_bytes_per_iter < 0 || spec.store_bytes_per_iter < 0) {
    throw Error("traffic volumes must be non-negative");
  }
  double ratio = spec.streaming ? TrafficRatio(mode, machine, active_cores)
                                : TrafficRatio(WAMode{}, machine, active_cores);
  return spec.load_bytes_per_iter + spec.store_bytes_per_iter * ratio;
}

std::vector<RatioCurve> ParseRatioCurves(std::string_view tsv, const std::string& source) {
  std::vector<RatioCurve> curves;
  std::size_t pos = 0;
  int line_no = 0;
  bool header = false;
  while (pos < tsv.size()) {
    auto nl = tsv.find('\n', pos);
    if (nl == std::string_view::npos) nl = tsv.size();
    auto line = tsv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    auto fields = SplitFields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (!header) {
      if (fields.size() < 2) throw ParseError(source, line_no, "need a core column and at least one ratio column");
      for (std::size_t i = 1; i < fields.size(); ++i) curves.push_back({fields[i], {}});
      header = true;
      continue;
    }
    if (fields.size() != curves.size() + 1) {
      throw ParseError(source, line_no, "expected " + std::to_string(curves.size() + 1) + " fields");
    }
    int cores = 0;
    try {
      std::size_t idx = 0;
      cores = std::stoi(fields[0], &idx);
      if (idx != fields[0].size() || cores < 1) throw 0;
    } catch (...) {
      throw ParseError(source, line_no, "core count must be a positive integer");
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto& f = fields[i];
      if (f == "nan" || f == "NaN" || f == "-") continue;
      double r = 0;
      try {
        std::size_t idx = 0;
        r = std::stod(f, &idx);
        if (idx != f.size()) throw 0;
      } catch (...) {
        throw ParseError(source, line_no, "malformed ratio '" + f + "'");
      }
      if (!(r >= 0.9 && r <= 2.1)) {
        throw ParseError(source, line_no, "ratio " + f + " outside [0.9, 2.1]");
      }
      auto& pts = curves[i - 1].points;
      if (!pts.empty() && cores <= pts.back().first) {
        throw ParseError(source, line_no, "core counts must be strictly increasing");
      }
      pts.emplace_back(cores, r);
    }
  }
  if (!header) throw ParseError(source, line_no, "empty ratio file");
  return curves;
}

std::vector<RatioCurve> LoadRatioCurves(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseRatioCurves(buf.str(), path);
}

double MaxAbsDeviation(const RatioCurve& curve, const WAMode& mode,
                       const MachineModel& machine) {
  double worst = 0;
  for (const auto& [cores, ratio] : curve.points) {
    worst = std::max(worst, std::abs(ratio - TrafficRatio(mode, machine, cores)));
  }
  return worst;
}

}  // namespace incore
