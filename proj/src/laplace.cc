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

#include "ahdp/laplace.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace ahdp {

absl::StatusOr<LaplaceScale> LaplaceScale::Create(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be finite and positive, got ", lambda));
  }
  return LaplaceScale(lambda);
}

double LaplaceQuantile(double u, double lambda) {
  const double centered = u - 0.5;
  const double magnitude = -lambda * std::log1p(-2.0 * std::fabs(centered));
  return centered < 0 ? -magnitude : magnitude;
}

double LaplaceSample(Rng& rng, LaplaceScale scale) {
  return LaplaceQuantile(rng.UniformOpen(), scale.lambda());
}

double LaplaceLogDensity(double x, LaplaceScale scale) {
  return -std::log(2.0 * scale.lambda()) - std::fabs(x) / scale.lambda();
}

double LaplaceCdf(double x, LaplaceScale scale) {
  const double z = x / scale.lambda();
  return z < 0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

}  // namespace ahdp
