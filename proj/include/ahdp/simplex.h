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

// Dense primal simplex for small linear programs whose origin is feasible.

#ifndef AHDP_SIMPLEX_H_
#define AHDP_SIMPLEX_H_

#include <vector>

#include "absl/status/statusor.h"

namespace ahdp {

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
};

// Maximizes c.x subject to A x <= b and x >= 0, where every b_i >= 0 so the
// origin is a feasible start. Uses Bland's rule, so it terminates on
// degenerate problems. Fails on unbounded or malformed programs.
absl::StatusOr<LpSolution> MaximizeFromOrigin(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    const std::vector<double>& c);

}  // namespace ahdp

#endif  // AHDP_SIMPLEX_H_
