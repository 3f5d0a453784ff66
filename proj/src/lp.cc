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

#include "incore/lp.h"

#include <cstddef>

#include "incore/errors.h"

namespace incore {

LpSolution MaximizePacking(const std::vector<Rational>& c,
                           const std::vector<std::vector<Rational>>& a,
                           const std::vector<Rational>& b) {
  const std::size_t n = c.size();
  const std::size_t m = a.size();
  if (b.size() != m) throw InternalError("LP: row count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw InternalError("LP: column count mismatch");
    if (b[i] < Rational(0)) throw InternalError("LP: negative right-hand side");
  }

  // Tableau rows 0..m-1 are constraints, row m is the reduced-cost row.
  // Columns 0..n-1 structural, n..n+m-1 slack, n+m is the rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(cols, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  LpSolution sol;
  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[m][j] < Rational(0)) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= Rational(0)) continue;
      Rational ratio = t[i][cols - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      sol.bounded = false;
      return sol;
    }
    Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == Rational(0)) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  sol.objective = t[m][cols - 1];
  sol.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) sol.x[basis[i]] = t[i][cols - 1];
  }
  return sol;
}

}  // namespace incore
