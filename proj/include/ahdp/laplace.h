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

// Laplace(0, lambda) with density exp(-|x| / lambda) / (2 lambda).
//
// Sampling is by inverse CDF on an open uniform draw, so the density used by
// the auditors is exactly the one sampled from.

#ifndef AHDP_LAPLACE_H_
#define AHDP_LAPLACE_H_

#include "absl/status/statusor.h"
#include "ahdp/rng.h"

namespace ahdp {

class LaplaceScale {
 public:
  // Requires a finite lambda > 0.
  static absl::StatusOr<LaplaceScale> Create(double lambda);

  double lambda() const { return lambda_; }

 private:
  explicit LaplaceScale(double lambda) : lambda_(lambda) {}
  double lambda_;
};

double LaplaceSample(Rng& rng, LaplaceScale scale);

// Inverse CDF at u in (0, 1).
double LaplaceQuantile(double u, double lambda);

// -ln(2 lambda) - |x| / lambda.
double LaplaceLogDensity(double x, LaplaceScale scale);
double LaplaceCdf(double x, LaplaceScale scale);

}  // namespace ahdp

#endif  // AHDP_LAPLACE_H_
