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

// Reference kernels. The association order here is the contract the vector
// variants reproduce.

#include <algorithm>
#include <cmath>

#include "ahdp/kernels.h"

namespace ahdp::kernels::scalar {

double WeightedSum(std::span<const double> weights,
                   std::span<const double> values) {
  const size_t n = weights.size();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (size_t lane = 0; lane < 4; ++lane) {
      acc[lane] += weights[i + lane] * values[i + lane];
    }
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) total += weights[i] * values[i];
  return total;
}

void WeightedGram(std::span<const double> rows,
                  std::span<const double> targets,
                  std::span<const double> weights, size_t dim,
                  std::span<double> gram, std::span<double> moment) {
  const size_t n = weights.size();
  for (size_t k = 0; k < n; ++k) {
    const double* x = rows.data() + k * dim;
    for (size_t i = 0; i < dim; ++i) {
      const double wx = weights[k] * x[i];
      double* g = gram.data() + i * dim;
      for (size_t j = 0; j < dim; ++j) g[j] += wx * x[j];
      moment[i] += wx * targets[k];
    }
  }
}

double MaxAbsLaplaceLogRatio(std::span<const double> points, double center_a,
                             double center_b, double scale) {
  double best = 0.0;
  for (double p : points) {
    const double r =
        (std::fabs(p - center_b) - std::fabs(p - center_a)) / scale;
    best = std::max(best, std::fabs(r));
  }
  return best;
}

void LaplaceLogDensityBatch(std::span<const double> points, double center,
                            double scale, std::span<double> out) {
  const double log_norm = -std::log(2.0 * scale);
  for (size_t i = 0; i < points.size(); ++i) {
    out[i] = log_norm - std::fabs(points[i] - center) / scale;
  }
}

}  // namespace ahdp::kernels::scalar
