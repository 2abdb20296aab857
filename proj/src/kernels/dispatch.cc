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

#include <atomic>
#include <cstdlib>

#include "absl/strings/string_view.h"
#include "ahdp/kernels.h"

namespace ahdp::kernels {
namespace {

Backend InitialBackend() {
  const char* forced = std::getenv("AHDP_KERNELS");
  if (forced != nullptr && absl::string_view(forced) == "scalar") {
    return Backend::kScalar;
  }
  return Avx2Supported() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& ActiveSlot() {
  static std::atomic<Backend> active{InitialBackend()};
  return active;
}

bool UseAvx2() {
#if defined(AHDP_HAVE_AVX2_KERNELS)
  return ActiveSlot().load(std::memory_order_relaxed) == Backend::kAvx2;
#else
  return false;
#endif
}

}  // namespace

const char* BackendName(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

bool Avx2Supported() {
#if defined(AHDP_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend ActiveBackend() { return ActiveSlot().load(); }

bool SetBackend(Backend backend) {
  if (backend == Backend::kAvx2 && !Avx2Supported()) return false;
  ActiveSlot().store(backend);
  return true;
}

double WeightedSum(std::span<const double> weights,
                   std::span<const double> values) {
#if defined(AHDP_HAVE_AVX2_KERNELS)
  if (UseAvx2()) return avx2::WeightedSum(weights, values);
#endif
  return scalar::WeightedSum(weights, values);
}

void WeightedGram(std::span<const double> rows,
                  std::span<const double> targets,
                  std::span<const double> weights, size_t dim,
                  std::span<double> gram, std::span<double> moment) {
#if defined(AHDP_HAVE_AVX2_KERNELS)
  if (UseAvx2()) {
    avx2::WeightedGram(rows, targets, weights, dim, gram, moment);
    return;
  }
#endif
  scalar::WeightedGram(rows, targets, weights, dim, gram, moment);
}

double MaxAbsLaplaceLogRatio(std::span<const double> points, double center_a,
                             double center_b, double scale) {
#if defined(AHDP_HAVE_AVX2_KERNELS)
  if (UseAvx2()) {
    return avx2::MaxAbsLaplaceLogRatio(points, center_a, center_b, scale);
  }
#endif
  return scalar::MaxAbsLaplaceLogRatio(points, center_a, center_b, scale);
}

void LaplaceLogDensityBatch(std::span<const double> points, double center,
                            double scale, std::span<double> out) {
#if defined(AHDP_HAVE_AVX2_KERNELS)
  if (UseAvx2()) {
    avx2::LaplaceLogDensityBatch(points, center, scale, out);
    return;
  }
#endif
  scalar::LaplaceLogDensityBatch(points, center, scale, out);
}

}  // namespace ahdp::kernels
