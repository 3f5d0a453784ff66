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

#include <algorithm>
#include <set>

#include "incore/errors.h"
#include "incore/lp.h"
#include "incore/machine_model.h"

namespace incore {
namespace {

bool IsRegisterOnlyArithmetic(const InstructionDescriptor& d) {
  if (FlopsPerInstruction(d) <= 0) return false;
  std::size_t pos = d.form.find(' ');
  while (pos != std::string::npos) {
    std::size_t start = pos + 1;
    pos = d.form.find(", ", start);
    std::string cls = d.form.substr(start, pos == std::string::npos ? pos : pos - start);
    if (cls == "mem" || cls == "vmem") return false;
    if (pos != std::string::npos) ++pos;
  }
  return true;
}

}  // namespace

PeakMix PeakFlopsPerCycle(const MachineModel& model) {
  std::vector<const InstructionDescriptor*> forms;
  for (const auto& d : model.instructions) {
    if (IsRegisterOnlyArithmetic(d)) forms.push_back(&d);
  }
  PeakMix out;
  if (forms.empty()) return out;

  // Port-capacity (Hall) constraints: for each union S of eligible sets, the
  // occupancy that can only go to S fits into |S| port-cycles.
  std::set<std::vector<std::size_t>> sets;
  for (const auto* d : forms) {
    for (const auto& u : d->uops) sets.insert(u.ports);
  }
  std::vector<std::vector<std::size_t>> distinct(sets.begin(), sets.end());
  if (distinct.size() > 20) throw InternalError("too many distinct port sets for peak LP");
  std::set<std::vector<std::size_t>> unions;
  for (std::uint32_t mask = 1; mask < (1u << distinct.size()); ++mask) {
    std::set<std::size_t> s;
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      if (mask & (1u << k)) s.insert(distinct[k].begin(), distinct[k].end());
    }
    unions.emplace(s.begin(), s.end());
  }

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (const auto& s : unions) {
    std::vector<Rational> row;
    for (const auto* d : forms) {
      Rational load(0);
      for (const auto& u : d->uops) {
        if (std::includes(s.begin(), s.end(), u.ports.begin(), u.ports.end())) {
          load += u.occupancy;
        }
      }
      row.push_back(load);
    }
    a.push_back(std::move(row));
    b.emplace_back(static_cast<std::int64_t>(s.size()));
  }
  std::vector<Rational> issue;
  std::vector<Rational> c;
  for (const auto* d : forms) {
    issue.emplace_back(static_cast<std::int64_t>(d->uops.size()));
    c.emplace_back(FlopsPerInstruction(*d));
  }
  a.push_back(std::move(issue));
  b.emplace_back(model.issue_width);

  LpSolution sol = MaximizePacking(c, a, b);
  if (!sol.bounded) throw InternalError("peak LP unbounded");
  out.flops_per_cycle = sol.objective;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (sol.x[i] != Rational(0)) out.mix.emplace_back(forms[i]->form, sol.x[i]);
  }
  return out;
}

}  // namespace incore
