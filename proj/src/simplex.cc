// Copyright 2026 The AHDP Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ahdp/simplex.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"

namespace ahdp {
namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr int kMaxIterations = 1000000;

}  // namespace

absl::StatusOr<LpSolution> MaximizeFromOrigin(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    const std::vector<double>& c) {
  const size_t m = a.size();
  const size_t n = c.size();
  if (b.size() != m) return absl::InvalidArgumentError("b has wrong size");
  for (size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) return absl::InvalidArgumentError("ragged A");
    if (!(b[i] >= 0.0)) {
      return absl::InvalidArgumentError("origin is infeasible (b_i < 0)");
    }
  }

  // Tableau columns: n originals, m slacks, rhs. Row m holds the reduced
  // costs as -c (maximization: optimal once no entry is negative).
  const size_t width = n + m + 1;
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](size_t r, size_t col) -> double& { return t[r * width + col]; };
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) at(i, j) = a[i][j];
    at(i, n + i) = 1.0;
    at(i, width - 1) = b[i];
    basis[i] = n + i;
  }
  for (size_t j = 0; j < n; ++j) at(m, j) = -c[j];

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Bland: lowest-index improving column.
    size_t enter = width;
    for (size_t j = 0; j + 1 < width; ++j) {
      if (at(m, j) < -kPivotTolerance) {
        enter = j;
        break;
      }
    }
    if (enter == width) {
      LpSolution solution;
      solution.value = at(m, width - 1);
      solution.x.assign(n, 0.0);
      for (size_t i = 0; i < m; ++i) {
        if (basis[i] < n) solution.x[basis[i]] = at(i, width - 1);
      }
      return solution;
    }
    // Ratio test; ties broken by the lowest basic variable index.
    size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
      const double coef = at(i, enter);
      if (coef <= kPivotTolerance) continue;
      const double ratio = at(i, width - 1) / coef;
      if (ratio < best ||
          (leave < m && ratio == best && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) return absl::FailedPreconditionError("LP is unbounded");

    const double pivot = at(leave, enter);
    for (size_t j = 0; j < width; ++j) at(leave, j) /= pivot;
    for (size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (size_t j = 0; j < width; ++j) at(r, j) -= factor * at(leave, j);
    }
    basis[leave] = enter;
  }
  return absl::ResourceExhaustedError("simplex iteration limit reached");
}

}  // namespace ahdp
