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

// AVX2 kernels. Built with -mavx2 only (no FMA): every lane performs the
// same multiply-then-add as the scalar reference.

#include "ahdp/kernels.h"

#if defined(AHDP_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace ahdp::kernels::avx2 {
namespace {

inline __m256d Abs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

double WeightedSum(std::span<const double> weights,
                   std::span<const double> values) {
  const size_t n = weights.size();
  const double* w = weights.data();
  const double* v = values.data();
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod =
        _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(v + i));
    acc = _mm256_add_pd(acc, prod);
  }
  // [a0, a1] + [a2, a3] = [a0 + a2, a1 + a3], then sum the pair.
  const __m128d halves =
      _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double total = _mm_cvtsd_f64(halves) +
                 _mm_cvtsd_f64(_mm_unpackhi_pd(halves, halves));
  for (; i < n; ++i) total += w[i] * v[i];
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
      const __m256d wxv = _mm256_set1_pd(wx);
      double* g = gram.data() + i * dim;
      size_t j = 0;
      for (; j + 4 <= dim; j += 4) {
        const __m256d prod = _mm256_mul_pd(wxv, _mm256_loadu_pd(x + j));
        _mm256_storeu_pd(g + j, _mm256_add_pd(_mm256_loadu_pd(g + j), prod));
      }
      for (; j < dim; ++j) g[j] += wx * x[j];
      moment[i] += wx * targets[k];
    }
  }
}

double MaxAbsLaplaceLogRatio(std::span<const double> points, double center_a,
                             double center_b, double scale) {
  const size_t n = points.size();
  const double* p = points.data();
  const __m256d ca = _mm256_set1_pd(center_a);
  const __m256d cb = _mm256_set1_pd(center_b);
  const __m256d s = _mm256_set1_pd(scale);
  __m256d best = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pv = _mm256_loadu_pd(p + i);
    const __m256d diff = _mm256_sub_pd(Abs(_mm256_sub_pd(pv, cb)),
                                       Abs(_mm256_sub_pd(pv, ca)));
    best = _mm256_max_pd(best, Abs(_mm256_div_pd(diff, s)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double result = std::max(std::max(lanes[0], lanes[1]),
                           std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double r = (std::fabs(p[i] - center_b) - std::fabs(p[i] - center_a)) /
                     scale;
    result = std::max(result, std::fabs(r));
  }
  return result;
}

void LaplaceLogDensityBatch(std::span<const double> points, double center,
                            double scale, std::span<double> out) {
  const double log_norm = -std::log(2.0 * scale);
  const size_t n = points.size();
  const __m256d c = _mm256_set1_pd(center);
  const __m256d s = _mm256_set1_pd(scale);
  const __m256d ln = _mm256_set1_pd(log_norm);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dist = Abs(_mm256_sub_pd(_mm256_loadu_pd(points.data() + i), c));
    _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(ln, _mm256_div_pd(dist, s)));
  }
  for (; i < n; ++i) {
    out[i] = log_norm - std::fabs(points[i] - center) / scale;
  }
}

}  // namespace ahdp::kernels::avx2

#endif  // AHDP_HAVE_AVX2_KERNELS
