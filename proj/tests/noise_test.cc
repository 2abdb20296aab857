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

#include <algorithm>
#include <cmath>
#include <vector>

#include "ahdp/laplace.h"
#include "ahdp/rng.h"
#include "gtest/gtest.h"

namespace ahdp {
namespace {

LaplaceScale Scale(double lambda) { return LaplaceScale::Create(lambda).value(); }

TEST(RngTest, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  Rng c(43);
  Rng d(42, 1);
  Rng e(42);
  EXPECT_NE(c(), e());
  EXPECT_NE(d(), Rng(42)());
}

TEST(RngTest, DeriveIsOrderIndependent) {
  Rng base(7);
  const uint64_t first = base.Derive(3)();
  base();
  base();
  EXPECT_EQ(base.Derive(3)(), first);
  EXPECT_NE(base.Derive(4)(), first);
}

TEST(RngTest, UniformRanges) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.UniformOpen();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.UniformInt(7), 7u);
  }
}

TEST(LaplaceTest, ScaleMustBePositive) {
  EXPECT_FALSE(LaplaceScale::Create(0).ok());
  EXPECT_FALSE(LaplaceScale::Create(-1).ok());
  EXPECT_FALSE(LaplaceScale::Create(std::nan("")).ok());
  EXPECT_TRUE(LaplaceScale::Create(1e-9).ok());
}

TEST(LaplaceTest, MomentsAtUnitScale) {
  Rng rng(2024);
  constexpr int kN = 1000000;
  double sum = 0;
  double sum_sq = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = LaplaceSample(rng, Scale(1));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kN;
  EXPECT_NEAR(mean, 0.0, 0.005);
  EXPECT_NEAR(sum_sq / kN - mean * mean, 2.0, 0.02);
}

TEST(LaplaceTest, SameSeedSameSamples) {
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(LaplaceSample(a, Scale(3)), LaplaceSample(b, Scale(3)));
  }
}

TEST(LaplaceTest, KolmogorovSmirnovAgainstCdf) {
  for (double lambda : {0.5, 1.0, 72.0}) {
    Rng rng(99);
    std::vector<double> xs(100000);
    for (double& x : xs) x = LaplaceSample(rng, Scale(lambda));
    std::sort(xs.begin(), xs.end());
    double ks = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      const double f = LaplaceCdf(xs[i], Scale(lambda));
      ks = std::max({ks, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
    }
    EXPECT_LT(ks, 0.01) << "lambda " << lambda;
  }
}

TEST(LaplaceTest, LogDensityExamples) {
  EXPECT_NEAR(LaplaceLogDensity(0, Scale(1)), -0.6931, 1e-4);
  EXPECT_DOUBLE_EQ(LaplaceLogDensity(0, Scale(1)), -std::log(2.0));
  for (double lambda : {0.1, 1.0, 3.5}) {
    EXPECT_DOUBLE_EQ(LaplaceLogDensity(lambda, Scale(lambda)),
                     -std::log(2 * lambda) - 1);
  }
  for (double x : {0.3, 2.0, 17.0}) {
    EXPECT_EQ(LaplaceLogDensity(x, Scale(2)), LaplaceLogDensity(-x, Scale(2)));
  }
}

TEST(LaplaceTest, QuantileInvertsCdf) {
  for (double u : {1e-12, 0.01, 0.3, 0.5, 0.7, 0.99, 1 - 1e-12}) {
    const double x = LaplaceQuantile(u, 2.0);
    EXPECT_NEAR(LaplaceCdf(x, Scale(2.0)), u, 1e-12);
  }
}

TEST(LaplacePropertyTest, LogDensityIsLipschitz) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double lambda = 0.01 + 10 * rng.Uniform();
    const double x = 40 * (rng.Uniform() - 0.5);
    const double y = 40 * (rng.Uniform() - 0.5);
    const double gap = std::fabs(LaplaceLogDensity(x, Scale(lambda)) -
                                 LaplaceLogDensity(y, Scale(lambda)));
    EXPECT_LE(gap, std::fabs(x - y) / lambda * (1 + 1e-12) + 1e-12);
  }
}

}  // namespace
}  // namespace ahdp
