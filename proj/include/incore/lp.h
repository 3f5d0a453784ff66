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

// Small exact linear programs.

#ifndef INCORE_LP_H_
#define INCORE_LP_H_

#include <vector>

#include "incore/rational.h"

namespace incore {

struct LpSolution {
  bool bounded = true;
  Rational objective{0};
  std::vector<Rational> x;
};

// maximize c.x subject to A x <= b, x >= 0, with b >= 0 (the origin is
// feasible). Dense tableau simplex with Bland's rule.
LpSolution MaximizePacking(const std::vector<Rational>& c,
                           const std::vector<std::vector<Rational>>& a,
                           const std::vector<Rational>& b);

}  // namespace incore

#endif  // INCORE_LP_H_
