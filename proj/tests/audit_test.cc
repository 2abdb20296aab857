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

#include "ahdp/audit.h"

#include <cmath>
#include <vector>

#include "ahdp/power.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ahdp {
namespace {

using ::testing::HasSubstr;

std::vector<PrivacyMapping> Presets() {
  return {PrivacyMapping::Epsilon(), PrivacyMapping::OneMinusExp(),
          PrivacyMapping::Ratio(), PrivacyMapping::CappedEpsilon(1.0)};
}

std::vector<AuditSpec> Specs(const PrivacyMapping& alpha) {
  std::vector<AuditSpec> out;
  for (AuditTarget t :
       {AuditTarget::kLinearQuery, AuditTarget::kSum, AuditTarget::kCount,
        AuditTarget::kMeanParts, AuditTarget::kFrequencyVector,
        AuditTarget::kRegressionEntries}) {
    AuditSpec spec;
    spec.target = t;
    spec.alpha1 = alpha;
    spec.alpha2 = PrivacyMapping::Scaled(alpha, 0.5);
    spec.lower = -1;
    spec.upper = 2;
    spec.bins = 3;
    spec.dimension = 2;
    out.push_back(spec);
  }
  return out;
}

TEST(DensityAuditTest, IdenticalDatasets) {
  Rng rng(1);
  const Dataset d{{ScalarRecord(0.5, 1), 3}};
  auto report = DensityRatioAudit({}, d, d, 10, rng);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->observed, 0.0);
  EXPECT_EQ(report->claimed, 0.0);
  EXPECT_TRUE(report->pass);
}

TEST(DensityAuditTest, LinearQuerySaturatesAtAlpha) {
  Rng rng(2);
  const Dataset d{{ScalarRecord(0.25, 2), 4}};
  for (double eps : {0.1, 0.8, 2.0}) {
    const Record r = ScalarRecord(1.0, eps);  // f(x) = upper: full shift
    auto report = DensityRatioAudit({}, d, *Add(d, Dataset{{r, 1}}), 0, rng);
    ASSERT_TRUE(report.ok());
    EXPECT_NEAR(report->claimed, eps, 1e-15);
    EXPECT_NEAR(report->observed, eps, 1e-12);
    EXPECT_TRUE(report->pass);
  }
}

TEST(DensityAuditTest, FrequencyCountsWithinAlpha1) {
  Rng rng(3);
  AuditSpec spec{.target = AuditTarget::kFrequencyVector,
                 .alpha1 = PrivacyMapping::OneMinusExp(),
                 .alpha2 = PrivacyMapping::Constant(0),
                 .bins = 4};
  const Dataset d{{CategoryRecord(1, 1), 2}, {CategoryRecord(3, 0.5), 1}};
  const Record r = CategoryRecord(2, 1.5);
  auto report = DensityRatioAudit(spec, d, *Add(d, Dataset{{r, 1}}), 20, rng);
  ASSERT_TRUE(report.ok());
  EXPECT_LE(report->observed, -std::expm1(-1.5) + 1e-12);
  EXPECT_TRUE(report->pass);
}

TEST(DensityAuditTest, DividedMeanIsRejected) {
  Rng rng(4);
  auto report = DensityRatioAudit({.target = AuditTarget::kMean}, Dataset(),
                                  Dataset(), 1, rng);
  EXPECT_EQ(report.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(report.status().message(), HasSubstr("mean-parts"));
}

TEST(DensityAuditTest, RandomPairsPassForEveryPreset) {
  Rng rng(5);
  for (const PrivacyMapping& alpha : Presets()) {
    for (const AuditSpec& spec : Specs(alpha)) {
      for (int i = 0; i < 100; ++i) {
        auto [d, d2] = RandomAuditPair(spec, rng);
        ASSERT_LE(d.size(), 8u);
        ASSERT_LE(d.support_size(), 5u);
        auto report = DensityRatioAudit(spec, d, d2, 8, rng);
        ASSERT_TRUE(report.ok()) << report.status();
        EXPECT_TRUE(report->pass)
            << report->mechanism << " " << alpha.Describe() << " "
            << report->dataset << " vs " << report->neighbor << ": "
            << report->observed << " > " << report->claimed;
      }
    }
  }
}

TEST(CompositionAuditTest, PassesAgainstSummedMapping) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    AuditSpec first{.target = AuditTarget::kLinearQuery,
                    .alpha1 = PrivacyMapping::Epsilon()};
    AuditSpec second{.target = AuditTarget::kCount,
                     .alpha1 = PrivacyMapping::OneMinusExp()};
    auto [d, d2] = RandomAuditPair(first, rng);
    auto report = CompositionAudit(first, second, d, d2, 8, rng);
    ASSERT_TRUE(report.ok());
    EXPECT_TRUE(report->pass) << report->observed << " " << report->claimed;
    auto single = DensityRatioAudit(first, d, d2, 8, rng);
    EXPECT_LE(single->observed, report->observed + 1e-12);
  }
}

TEST(PostProcessingTest, ClippingNeverTurnsPassIntoFail) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    AuditSpec spec{.target = AuditTarget::kLinearQuery,
                   .alpha1 = Presets()[i % 4], .lower = -1, .upper = 2};
    auto [d, d2] = RandomAuditPair(spec, rng);
    auto plain = DensityRatioAudit(spec, d, d2, 8, rng);
    auto clipped = ClippedLinearQueryAudit(spec, -0.5, 1.5, d, d2, 8, rng);
    ASSERT_TRUE(plain.ok() && clipped.ok());
    EXPECT_TRUE(plain->pass);
    EXPECT_TRUE(clipped->pass);
    EXPECT_LE(clipped->observed, plain->observed + 1e-12);
  }
}

TEST(PostProcessingTest, ClipAtomsMatchCdf) {
  Rng rng(8);
  // One extra (1, eps) record shifts the center by eps; the lower atom of a
  // clip far below both centers carries the full ratio.
  const Dataset d;
  const Dataset d2{{ScalarRecord(1, 0.7), 1}};
  auto report = ClippedLinearQueryAudit({}, -50, 50, d, d2, 0, rng);
  ASSERT_TRUE(report.ok());
  EXPECT_NEAR(report->observed, 0.7, 1e-12);
}

TEST(FrontierTest, ThresholdTestsRespectTradeoff) {
  Rng rng(9);
  const AuditSpec spec{.target = AuditTarget::kLinearQuery};
  const Dataset d{{ScalarRecord(0, 1), 3}};
  const Dataset d2 = *Add(d, Dataset{{ScalarRecord(1, 1.2), 1}});
  for (double threshold : {-1.0, 0.0, 0.6, 1.2, 3.0}) {
    auto f = EmpiricalFrontier(spec, d, d2, threshold, 100000, rng);
    ASSERT_TRUE(f.ok());
    EXPECT_NEAR(f->distance, 1.2, 1e-15);
    EXPECT_TRUE(f->satisfied) << threshold << " slack " << f->slack;
    EXPECT_TRUE(HypothesisFrontierCheck(f->distance, f->type1 + f->tolerance,
                                        f->type2 + f->tolerance));
  }
}

TEST(SampleBruteForceTest, AllKeptCollapsesToSecondStage) {
  const Dataset d{{ScalarRecord(0.5, 3), 2}, {ScalarRecord(1, 5), 1}};
  const SecondStage stage = SecondStage::Sum(0, 1);
  const double t = 1.0;
  auto release = StageRelease(stage, d, t);
  for (double s : {-3.0, 0.0, 1.7, 2.0, 6.0}) {
    auto lp = SampleMechanismLogDensity(d, PrivacyMapping::Epsilon(), t, stage,
                                        {s});
    ASSERT_TRUE(lp.ok());
    const double direct =
        -std::log(2 * release->scales[0]) -
        std::fabs(s - release->centers[0]) / release->scales[0];
    EXPECT_NEAR(*lp, direct, 1e-12);
  }
}

TEST(SampleBruteForceTest, SingleUserMixtureByHand) {
  const double eps = 0.4;
  const double t = 1.0;
  const double p = (std::exp(eps) - 1) / (std::exp(t) - 1);
  const Dataset d{{ScalarRecord(0, eps), 1}};
  for (double s : {-2.0, 0.3, 0.9, 4.0}) {
    auto lp = SampleMechanismLogDensity(d, PrivacyMapping::Epsilon(), t,
                                        SecondStage::Count(), {s});
    const double lap1 = 0.5 * t * std::exp(-std::fabs(s - 1) * t);
    const double lap0 = 0.5 * t * std::exp(-std::fabs(s) * t);
    EXPECT_NEAR(*lp, std::log(p * lap1 + (1 - p) * lap0), 1e-12);
  }
}

TEST(SampleBruteForceTest, MixedDemandsPass) {
  const Dataset d{{ScalarRecord(0.2, 0.2), 2},
                  {ScalarRecord(0.9, 0.7), 2},
                  {ScalarRecord(0.5, 3.0), 2}};
  const double t = 1.0;
  const SecondStage stage = SecondStage::Sum(0, 1);
  auto grid = SampleMechanismGrid(d, t, stage, 101);
  ASSERT_TRUE(grid.ok());
  auto reports = SampleMechanismBruteForce(
      d, PrivacyMapping::Epsilon(), t, stage, *grid,
      {ScalarRecord(1, 0.05), ScalarRecord(0.8, 10)});
  ASSERT_TRUE(reports.ok()) << reports.status();
  EXPECT_EQ(reports->size(), 5u);
  for (const AuditReport& r : *reports) {
    EXPECT_TRUE(r.pass) << r.neighbor << " " << r.observed << " " << r.claimed;
    EXPECT_GT(r.observed, 0.0);
  }
}

TEST(SampleBruteForceTest, VectorStagesPass) {
  const double t = 0.8;
  const Dataset scalars{{ScalarRecord(0.3, 0.5), 2}, {ScalarRecord(1, 2), 2}};
  const Dataset labels{{CategoryRecord(1, 0.5), 2}, {CategoryRecord(2, 2), 2}};
  const Dataset points{
      {Record{DataValue::Regression({0.5, -0.5}, 0.25), PrivacyLevel(0.6)}, 2},
      {Record{DataValue::Regression({1, 0}, -1), PrivacyLevel(3)}, 1}};
  const std::vector<std::pair<Dataset, SecondStage>> cases = {
      {scalars, SecondStage::Mean(0, 1)},
      {labels, SecondStage::Histogram(3)},
      {points, SecondStage::Regression()}};
  for (const auto& [d, stage] : cases) {
    auto grid = SampleMechanismGrid(d, t, stage, 41);
    ASSERT_TRUE(grid.ok()) << grid.status();
    auto reports = SampleMechanismBruteForce(d, PrivacyMapping::Epsilon(), t,
                                             stage, *grid);
    ASSERT_TRUE(reports.ok()) << reports.status();
    for (const AuditReport& r : *reports) {
      EXPECT_TRUE(r.pass) << r.mechanism << " " << r.observed;
    }
  }
}

TEST(SampleBruteForceTest, ZeroDemandNeighborIsInvisible) {
  const Dataset d{{ScalarRecord(0.5, 1), 3}};
  const SecondStage stage = SecondStage::Sum(0, 1);
  auto grid = SampleMechanismGrid(d, 1.0, stage, 51);
  auto reports = SampleMechanismBruteForce(d, PrivacyMapping::Epsilon(), 1.0,
                                           stage, *grid, {ScalarRecord(1, 0)});
  ASSERT_TRUE(reports.ok());
  EXPECT_EQ(reports->back().claimed, 0.0);
  EXPECT_EQ(reports->back().observed, 0.0);
}

TEST(SampleBruteForceTest, RejectsLargeDatasets) {
  const Dataset d{{ScalarRecord(0.5, 1), 13}};
  auto reports = SampleMechanismBruteForce(d, PrivacyMapping::Epsilon(), 1.0,
                                           SecondStage::Count(), {{0.0}});
  EXPECT_EQ(reports.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(PosteriorOddsTest, ZeroDemandLeavesOddsUnchanged) {
  Rng rng(10);
  auto report = PosteriorOddsAudit({}, Dataset{{ScalarRecord(0.5, 1), 2}},
                                   ScalarRecord(1, 0), 3.0, 10, rng);
  ASSERT_TRUE(report.ok());
  EXPECT_NEAR(report->observed, 0.0, 1e-15);
}

TEST(PosteriorOddsTest, BoundedAndPriorIndependent) {
  for (const PrivacyMapping& alpha : Presets()) {
    for (const AuditSpec& spec : Specs(alpha)) {
      Rng a(11);
      Rng b(11);
      const Dataset d = RandomAuditPair(spec, a).first;
      Record r = ScalarRecord(1, 1.3);
      if (spec.target == AuditTarget::kFrequencyVector) r = CategoryRecord(2, 1.3);
      if (spec.target == AuditTarget::kRegressionEntries) {
        r = Record{DataValue::Regression({1, -1}, 1), PrivacyLevel(1.3)};
      }
      Rng p1(13);
      Rng p5(13);
      auto one = PosteriorOddsAudit(spec, d, r, 1.0, 16, p1);
      auto five = PosteriorOddsAudit(spec, d, r, 5.0, 16, p5);
      ASSERT_TRUE(one.ok() && five.ok()) << one.status() << five.status();
      EXPECT_TRUE(one->pass);
      EXPECT_EQ(one->pass, five->pass);
      EXPECT_NEAR(one->observed, five->observed, 1e-9);
      auto density = DensityRatioAudit(spec, d, *Add(d, Dataset{{r, 1}}), 0, b);
      EXPECT_LE(one->observed, density->observed + 1e-9);
    }
  }
  Rng rng(14);
  EXPECT_FALSE(
      PosteriorOddsAudit({}, Dataset(), ScalarRecord(0, 1), 0, 1, rng).ok());
}

TEST(HdpPitfallTest, AllPrivateOutputIsTwoPointLaw) {
  Rng rng(15);
  const std::vector<std::pair<int, double>> users(20, {1, 0.0});
  int low = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double out = HdpPitfallMechanism(users, rng);
    ASSERT_TRUE(out == -1.0 || out == 3.0);
    low += out == -1.0;
  }
  EXPECT_NEAR(low / static_cast<double>(n), 0.5, 3 * std::sqrt(0.25 / n));
}

TEST(HdpPitfallTest, AttackSucceedsWithLargeSurrogate) {
  Rng rng(16);
  auto rate = HdpPitfallDemo(20, 1e6, 10000, rng);
  ASSERT_TRUE(rate.ok());
  EXPECT_GE(*rate, 0.99);
}

TEST(HdpPitfallTest, ZeroSurrogateIsCoinFlip) {
  Rng rng(17);
  auto rate = HdpPitfallDemo(20, 0, 10000, rng);
  ASSERT_TRUE(rate.ok());
  EXPECT_NEAR(*rate, 0.5, 3 * std::sqrt(0.25 / 10000));
}

TEST(HdpPitfallTest, Errors) {
  Rng rng(18);
  EXPECT_FALSE(HdpPitfallDemo(0, 1, 10, rng).ok());
  EXPECT_FALSE(HdpPitfallDemo(5, -1, 10, rng).ok());
  EXPECT_FALSE(HdpPitfallDemo(5, 1, 0, rng).ok());
}

TEST(ParseAuditTargetTest, RoundTrip) {
  for (AuditTarget t :
       {AuditTarget::kLinearQuery, AuditTarget::kSum, AuditTarget::kCount,
        AuditTarget::kMeanParts, AuditTarget::kFrequencyVector,
        AuditTarget::kRegressionEntries, AuditTarget::kMean}) {
    EXPECT_EQ(*ParseAuditTarget(AuditTargetName(t)), t);
  }
  EXPECT_FALSE(ParseAuditTarget("median").ok());
}

}  // namespace
}  // namespace ahdp
