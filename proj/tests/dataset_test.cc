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

#include "ahdp/dataset.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "ahdp/dataset_csv.h"
#include "ahdp/privacy.h"
#include "ahdp/rng.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ahdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Dataset RandomDataset(Rng& rng) {
  // Support drawn from a small pool so random datasets overlap often.
  static const double kValues[] = {0.0, 1.0, 2.0};
  static const double kEps[] = {0.0, 0.5, 1.0, kInf};
  Dataset d;
  const uint64_t support = rng.UniformInt(7);
  for (uint64_t i = 0; i < support; ++i) {
    const Record r = ScalarRecord(kValues[rng.UniformInt(3)],
                                  kEps[rng.UniformInt(4)]);
    EXPECT_TRUE(d.Insert(r, rng.UniformInt(10) + 1).ok());
  }
  return d;
}

TEST(PrivacyLevelTest, RejectsNegativeAndNan) {
  EXPECT_FALSE(PrivacyLevel::Create(-0.1).ok());
  EXPECT_FALSE(PrivacyLevel::Create(std::nan("")).ok());
  EXPECT_TRUE(PrivacyLevel::Create(0.0).ok());
  ASSERT_TRUE(PrivacyLevel::Create(kInf).ok());
  EXPECT_TRUE(PrivacyLevel::Create(kInf)->is_infinite());
  EXPECT_TRUE(PrivacyLevel::Infinite().is_infinite());
  EXPECT_FALSE(PrivacyLevel(3.0).is_infinite());
}

TEST(DatasetTest, InsertDropsZeroCountsAndTracksSize) {
  Dataset d;
  ASSERT_TRUE(d.Insert(ScalarRecord(1, 1), 0).ok());
  EXPECT_TRUE(d.empty());
  ASSERT_TRUE(d.Insert(ScalarRecord(1, 1), 2).ok());
  ASSERT_TRUE(d.Insert(ScalarRecord(1, 1), 3).ok());
  EXPECT_EQ(d.count(ScalarRecord(1, 1)), 5u);
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.support_size(), 1u);
}

TEST(DatasetTest, InsertOverflowIsAnError) {
  Dataset d;
  ASSERT_TRUE(d.Insert(ScalarRecord(1, 1), kMaxRecordCount).ok());
  EXPECT_FALSE(d.Insert(ScalarRecord(1, 1), 1).ok());
  EXPECT_EQ(d.count(ScalarRecord(1, 1)), kMaxRecordCount);
}

TEST(DatasetTest, EqualityIgnoresInsertionOrder) {
  Dataset a;
  Dataset b;
  ASSERT_TRUE(a.Insert(ScalarRecord(0, 0)).ok());
  ASSERT_TRUE(a.Insert(ScalarRecord(2, kInf), 2).ok());
  ASSERT_TRUE(b.Insert(ScalarRecord(2, kInf)).ok());
  ASSERT_TRUE(b.Insert(ScalarRecord(0, 0)).ok());
  ASSERT_TRUE(b.Insert(ScalarRecord(2, kInf)).ok());
  EXPECT_EQ(a, b);
}

TEST(DatasetTest, ValueKindsNeverCompareEqual) {
  EXPECT_NE(DataValue::Scalar(1.0), DataValue::Category(1));
  EXPECT_NE(DataValue::Scalar(0.0), DataValue::Scalar(-0.0));
}

TEST(AddTest, Examples) {
  auto empty = Add(Dataset{}, Dataset{});
  ASSERT_TRUE(empty.ok());
  EXPECT_TRUE(empty->empty());

  const Dataset a{{ScalarRecord(1, 1), 2}};
  const Dataset b{{ScalarRecord(1, 1), 1}, {ScalarRecord(0, 0), 1}};
  auto sum = Add(a, b);
  ASSERT_TRUE(sum.ok());
  EXPECT_EQ(*sum, (Dataset{{ScalarRecord(1, 1), 3}, {ScalarRecord(0, 0), 1}}));

  auto identity = Add(b, Dataset{});
  ASSERT_TRUE(identity.ok());
  EXPECT_EQ(*identity, b);
}

TEST(AddTest, OverflowPropagates) {
  const Dataset big{{ScalarRecord(1, 1), kMaxRecordCount}};
  EXPECT_FALSE(Add(big, big).ok());
}

TEST(SubtractTest, Examples) {
  const Dataset three{{ScalarRecord(1, 1), 3}};
  EXPECT_EQ(Subtract(three, Dataset{{ScalarRecord(1, 1), 1}}),
            (Dataset{{ScalarRecord(1, 1), 2}}));
  EXPECT_TRUE(
      Subtract(Dataset{{ScalarRecord(1, 1), 1}}, Dataset{{ScalarRecord(1, 1), 5}})
          .empty());
  EXPECT_EQ(Subtract(three, Dataset{}), three);
}

TEST(ProjectDataTest, Examples) {
  const Dataset d{{ScalarRecord(1, 0.5), 2}, {ScalarRecord(1, 2.0), 3}};
  EXPECT_EQ(ProjectData(d), (DataMultiset{{DataValue::Scalar(1), 5}}));
  EXPECT_TRUE(ProjectData(Dataset{}).empty());
  const Dataset w{{ScalarRecord(0, 0), 10},
                  {ScalarRecord(1, 1), 10},
                  {ScalarRecord(2, kInf), 10}};
  EXPECT_EQ(ProjectData(w), (DataMultiset{{DataValue::Scalar(0), 10},
                                          {DataValue::Scalar(1), 10},
                                          {DataValue::Scalar(2), 10}}));
}

TEST(WeightedDistanceTest, Examples) {
  const PrivacyMapping eps = PrivacyMapping::Epsilon();
  const Dataset d{{ScalarRecord(0, 0), 10}, {ScalarRecord(1, 1), 10}};
  EXPECT_EQ(WeightedDistance(eps, d, d), 0.0);
  const Dataset d2{{ScalarRecord(0, 0), 9}, {ScalarRecord(1, 1), 12}};
  EXPECT_DOUBLE_EQ(WeightedDistance(eps, d, d2), 2.0);
  auto plus = Add(d, Dataset{{ScalarRecord(1, 1), 1}});
  ASSERT_TRUE(plus.ok());
  EXPECT_DOUBLE_EQ(WeightedDistance(eps, d, *plus), 1.0);
}

TEST(WeightedDistanceTest, InfiniteWeightOnDifferingRecord) {
  const Dataset a{{ScalarRecord(2, kInf), 1}};
  EXPECT_EQ(WeightedDistance(PrivacyMapping::Epsilon(), a, Dataset{}), kInf);
  // Equal counts contribute nothing even under an infinite weight.
  EXPECT_EQ(WeightedDistance(PrivacyMapping::Epsilon(), a, a), 0.0);
}

TEST(WeightedDistanceTest, ZeroIffAgreementOnPositiveWeights) {
  const Dataset a{{ScalarRecord(0, 0), 3}, {ScalarRecord(1, 1), 2}};
  const Dataset b{{ScalarRecord(0, 0), 7}, {ScalarRecord(1, 1), 2}};
  EXPECT_EQ(WeightedDistance(PrivacyMapping::Epsilon(), a, b), 0.0);
  EXPECT_GT(WeightedDistance(PrivacyMapping::Constant(1), a, b), 0.0);
}

TEST(DatasetPropertyTest, WeightedDistanceIsAPseudometric) {
  Rng rng(11);
  const PrivacyMapping mappings[] = {
      PrivacyMapping::Epsilon(), PrivacyMapping::OneMinusExp(),
      PrivacyMapping::Ratio(), PrivacyMapping::CappedEpsilon(0.7)};
  for (int trial = 0; trial < 500; ++trial) {
    const Dataset a = RandomDataset(rng);
    const Dataset b = RandomDataset(rng);
    const Dataset c = RandomDataset(rng);
    for (const PrivacyMapping& m : mappings) {
      const double ab = WeightedDistance(m, a, b);
      EXPECT_EQ(ab, WeightedDistance(m, b, a));
      EXPECT_EQ(WeightedDistance(m, a, a), 0.0);
      const double ac = WeightedDistance(m, a, c);
      const double bc = WeightedDistance(m, b, c);
      if (std::isfinite(ab) && std::isfinite(bc)) {
        EXPECT_LE(ac, ab + bc + 1e-12);
      }
    }
  }
}

TEST(DatasetPropertyTest, ProjectionIsAHomomorphism) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const Dataset a = RandomDataset(rng);
    const Dataset b = RandomDataset(rng);
    auto sum = Add(a, b);
    ASSERT_TRUE(sum.ok());
    DataMultiset expected = ProjectData(a);
    for (const auto& [value, count] : ProjectData(b)) expected[value] += count;
    EXPECT_EQ(ProjectData(*sum), expected);
    EXPECT_EQ(sum->size(), a.size() + b.size());
    EXPECT_EQ(Subtract(*sum, b), a);
  }
}

TEST(CorrelationDomainTest, Admits) {
  const CorrelationDomain w({ScalarRecord(0, 0), ScalarRecord(1, 1)});
  EXPECT_TRUE(w.Admits(Dataset{{ScalarRecord(1, 1), 4}}));
  EXPECT_FALSE(w.Admits(Dataset{{ScalarRecord(1, 2), 1}}));
  EXPECT_EQ(w.size(), 2u);
}

TEST(EncodingTest, CanonicalAndInjective) {
  EXPECT_EQ(EncodeRecord(ScalarRecord(2, kInf)), "(2,inf)");
  EXPECT_EQ(EncodeRecord(CategoryRecord(3, 0.5)), "(#3,0.5)");
  const Dataset d{{ScalarRecord(1, 1), 2}, {ScalarRecord(0, 0), 1}};
  EXPECT_EQ(EncodeDataset(d), "{(0,0)x1;(1,1)x2}");
  EXPECT_NE(EncodeValue(DataValue::Scalar(0.1)),
            EncodeValue(DataValue::Scalar(0.1 + 1e-17 * 8)));
}

TEST(CsvTest, ScalarRoundTripWithQuantization) {
  std::istringstream in(
      "value,epsilon\n"
      "# comment\n"
      "\n"
      "70.004,0.5\n"
      "70.001,0.5\n"
      "80,inf\n");
  auto parsed = ReadDatasetCsv(in);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(parsed->kind, ValueKind::kScalar);
  EXPECT_EQ(parsed->dataset.count(ScalarRecord(70.0, 0.5)), 2u);
  EXPECT_EQ(parsed->dataset.count(ScalarRecord(80.0, kInf)), 1u);

  std::ostringstream out;
  ASSERT_TRUE(WriteDatasetCsv(out, parsed->dataset).ok());
  std::istringstream again(out.str());
  auto reparsed = ReadDatasetCsv(again);
  ASSERT_TRUE(reparsed.ok());
  EXPECT_EQ(reparsed->dataset, parsed->dataset);
}

TEST(CsvTest, CategoricalAndRegression) {
  std::istringstream cat("label,epsilon\n1,0.01\n6,5\n6,5\n");
  auto c = ReadDatasetCsv(cat);
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->kind, ValueKind::kCategorical);
  EXPECT_EQ(c->dataset.count(CategoryRecord(6, 5)), 2u);

  std::istringstream reg("x1,x2,y,epsilon\n0.5,-0.25,0.1,inf\n");
  auto r = ReadDatasetCsv(reg);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->kind, ValueKind::kRegression);
  EXPECT_EQ(r->dimension, 2u);
  ASSERT_EQ(r->dataset.support_size(), 1u);
  const Record& rec = r->dataset.begin()->first;
  EXPECT_THAT(rec.value.regression().covariates,
              testing::ElementsAre(0.5, -0.25));
  EXPECT_TRUE(rec.epsilon.is_infinite());
}

TEST(CsvTest, RejectsMalformedInput) {
  for (const char* text :
       {"value,epsilon\n1\n", "value,epsilon\n1,-1\n", "label,epsilon\n0,1\n",
        "value,epsilon\nabc,1\n", "foo,bar\n1,1\n"}) {
    std::istringstream in(text);
    EXPECT_FALSE(ReadDatasetCsv(in).ok()) << text;
  }
}

TEST(CsvTest, PrivacyTokens) {
  for (const char* token : {"inf", "+inf", "infinity"}) {
    auto level = ParsePrivacyLevel(token);
    ASSERT_TRUE(level.ok()) << token;
    EXPECT_TRUE(level->is_infinite());
  }
  EXPECT_FALSE(ParsePrivacyLevel("-1").ok());
  EXPECT_FALSE(ParsePrivacyLevel("nan").ok());
}

}  // namespace
}  // namespace ahdp
