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

// Arithmetic inner loops shared by the mechanisms and the auditors.
//
// Every kernel has a scalar reference and an AVX2 variant. The two perform
// the same IEEE operations in the same association order (reductions use
// four interleaved accumulators, combined as (a0 + a2) + (a1 + a3)), and the
// project is compiled with -ffp-contract=off, so the variants agree bit for
// bit. Results therefore do not depend on which backend the CPU selects.

#ifndef AHDP_KERNELS_H_
#define AHDP_KERNELS_H_

#include <cstddef>
#include <span>

namespace ahdp::kernels {

enum class Backend { kScalar, kAvx2 };

const char* BackendName(Backend backend);

// Whether this binary carries the AVX2 variant and the CPU supports it.
bool Avx2Supported();

// Backend used by the dispatching entry points below. Defaults to AVX2 when
// supported; the environment variable AHDP_KERNELS=scalar forces the
// reference path.
Backend ActiveBackend();

// Returns false (and changes nothing) if `backend` is unavailable.
bool SetBackend(Backend backend);

// sum_i weights[i] * values[i]. Spans must have equal length.
double WeightedSum(std::span<const double> weights,
                   std::span<const double> values);

// Accumulates the weighted normal equations of a row-major design matrix:
//   gram[i*dim + j] += sum_k w_k x_ki x_kj,  moment[i] += sum_k w_k x_ki y_k.
// rows.size() == n * dim, targets.size() == weights.size() == n.
void WeightedGram(std::span<const double> rows,
                  std::span<const double> targets,
                  std::span<const double> weights, size_t dim,
                  std::span<double> gram, std::span<double> moment);

// max_i |(|p_i - center_b| - |p_i - center_a|) / scale|: the largest log
// density ratio between Laplace(center_a, scale) and Laplace(center_b, scale)
// over the probe points. Returns 0 for an empty span.
double MaxAbsLaplaceLogRatio(std::span<const double> points, double center_a,
                             double center_b, double scale);

// out[i] = -ln(2 scale) - |points[i] - center| / scale.
void LaplaceLogDensityBatch(std::span<const double> points, double center,
                            double scale, std::span<double> out);

namespace scalar {
double WeightedSum(std::span<const double> weights,
                   std::span<const double> values);
void WeightedGram(std::span<const double> rows,
                  std::span<const double> targets,
                  std::span<const double> weights, size_t dim,
                  std::span<double> gram, std::span<double> moment);
double MaxAbsLaplaceLogRatio(std::span<const double> points, double center_a,
                             double center_b, double scale);
void LaplaceLogDensityBatch(std::span<const double> points, double center,
                            double scale, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define AHDP_HAVE_AVX2_KERNELS 1
namespace avx2 {
double WeightedSum(std::span<const double> weights,
                   std::span<const double> values);
void WeightedGram(std::span<const double> rows,
                  std::span<const double> targets,
                  std::span<const double> weights, size_t dim,
                  std::span<double> gram, std::span<double> moment);
double MaxAbsLaplaceLogRatio(std::span<const double> points, double center_a,
                             double center_b, double scale);
void LaplaceLogDensityBatch(std::span<const double> points, double center,
                            double scale, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace ahdp::kernels

#endif  // AHDP_KERNELS_H_
