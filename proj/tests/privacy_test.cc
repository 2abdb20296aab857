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

#include "ahdp/privacy.h"

#include <cmath>
#include <limits>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ahdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double At(const PrivacyMapping& m, double eps) {
  return m.Evaluate(DataValue::Scalar(0), PrivacyLevel(eps));
}

TEST(EvaluateTest, PresetValues) {
  EXPECT_EQ(At(PrivacyMapping::OneMinusExp(), 0.0), 0.0);
  EXPECT_EQ(At(PrivacyMapping::OneMinusExp(), kInf), 1.0);
  EXPECT_DOUBLE_EQ(At(PrivacyMapping::OneMinusExp(), 1.0), 1 - std::exp(-1.0));
  EXPECT_DOUBLE_EQ(At(PrivacyMapping::Ratio(), 1.0), 0.5);
  EXPECT_EQ(At(PrivacyMapping::Ratio(), kInf), 1.0);
  EXPECT_EQ(At(PrivacyMapping::CappedEpsilon(2), 1.0), 1.0);
  EXPECT_EQ(At(PrivacyMapping::CappedEpsilon(2), 3.0), 2.0);
  EXPECT_EQ(At(PrivacyMapping::CappedEpsilon(2), kInf), 2.0);
  EXPECT_EQ(At(PrivacyMapping::Epsilon(), kInf), kInf);
  EXPECT_EQ(At(PrivacyMapping::Scaled(PrivacyMapping::Epsilon(), 0), kInf),
            0.0);
  EXPECT_EQ(At(PrivacyMapping::Constant(0.3), kInf), 0.3);
}

TEST(EvaluateTest, PerValueMinLooksUpData) {
  const PrivacyMapping m = PrivacyMapping::PerValueMin(
      {{DataValue::Scalar(0), 0.25}, {DataValue::Scalar(1), 2.0}});
  EXPECT_EQ(m.Evaluate(DataValue::Scalar(0), PrivacyLevel(9)), 0.25);
  EXPECT_EQ(m.Evaluate(DataValue::Scalar(1), PrivacyLevel(9)), 2.0);
  EXPECT_EQ(m.Evaluate(DataValue::Scalar(5), PrivacyLevel(9)), kInf);
}

TEST(EvaluateTest, PresetsAreMonotoneAndBounded) {
  const double grid[] = {0, 1e-3, 0.1, 0.5, 1, 2, 3, 10, 100, kInf};
  for (const PrivacyMapping& m :
       {PrivacyMapping::OneMinusExp(), PrivacyMapping::Ratio(),
        PrivacyMapping::CappedEpsilon(1.5)}) {
    const double bound = m.kind() == MappingKind::kCapped ? 1.5 : 1.0;
    double previous = -1;
    for (double eps : grid) {
      const double v = At(m, eps);
      EXPECT_GE(v, previous) << m.Describe() << " at " << eps;
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, bound);
      previous = v;
    }
  }
}

TEST(CertifyTest, Examples) {
  const CorrelationDomain w({ScalarRecord(0, 0), ScalarRecord(1, 1),
                             ScalarRecord(2, kInf)});
  EXPECT_TRUE(Certify(PrivacyMapping::Epsilon(), w).is_w_ahdp);

  // Constant(e') over X x {e_h} certifies iff e' <= e_h.
  const CorrelationDomain homogeneous(
      {ScalarRecord(0, 0.7), ScalarRecord(1, 0.7), ScalarRecord(2, 0.7)});
  EXPECT_TRUE(Certify(PrivacyMapping::Constant(0.7), homogeneous).is_w_ahdp);
  EXPECT_TRUE(Certify(PrivacyMapping::Constant(0.2), homogeneous).is_w_ahdp);
  EXPECT_FALSE(Certify(PrivacyMapping::Constant(0.71), homogeneous).is_w_ahdp);

  const PrivacyCertificate doubled =
      Certify(PrivacyMapping::Scaled(PrivacyMapping::Epsilon(), 2),
              CorrelationDomain({ScalarRecord(0, 1)}));
  EXPECT_FALSE(doubled.is_w_ahdp);
  EXPECT_THAT(doubled.witnesses, testing::ElementsAre(ScalarRecord(0, 1)));
}

TEST(CertifyTest, PresetsCertifyEverywhere) {
  std::vector<Record> pairs;
  for (double eps : {0.0, 0.01, 0.5, 1.0, 3.0, kInf}) {
    pairs.push_back(ScalarRecord(eps == kInf ? 9 : eps, eps));
  }
  const CorrelationDomain w(pairs);
  for (const char* name : {"epsilon", "one-minus-exp", "ratio", "capped:0.5"}) {
    auto m = ParseMapping(name);
    ASSERT_TRUE(m.ok());
    EXPECT_TRUE(Certify(*m, w).is_w_ahdp) << name;
  }
}

TEST(ComposeTest, Examples) {
  const PrivacyMapping a = PrivacyMapping::Ratio();
  const PrivacyMapping zero_plus = Compose(PrivacyMapping::Constant(0), a);
  for (double eps : {0.0, 0.3, 4.0, kInf}) {
    EXPECT_EQ(At(zero_plus, eps), At(a, eps));
  }
  const PrivacyMapping half =
      PrivacyMapping::Scaled(PrivacyMapping::OneMinusExp(), 0.5);
  EXPECT_NEAR(At(Compose(half, half), 1.0), 1 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(At(Compose(half, half), 1.0), 0.6321, 1e-4);
  EXPECT_FALSE(Certify(Compose(PrivacyMapping::Epsilon(),
                               PrivacyMapping::Epsilon()),
                       CorrelationDomain({ScalarRecord(0, 1)}))
                   .is_w_ahdp);
}

TEST(ComposeTest, EvaluatesAsExactPointwiseSum) {
  const PrivacyMapping a1 = PrivacyMapping::CappedEpsilon(0.4);
  const PrivacyMapping a2 = PrivacyMapping::Ratio();
  for (double eps = 0; eps < 5; eps += 0.37) {
    EXPECT_EQ(At(Compose(a1, a2), eps), At(a1, eps) + At(a2, eps));
  }
}

TEST(ComposeTest, CertificateAgreesWithPointwiseSum) {
  const double levels[] = {0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0};
  const PrivacyMapping parts[] = {
      PrivacyMapping::Constant(0.1), PrivacyMapping::OneMinusExp(),
      PrivacyMapping::Scaled(PrivacyMapping::Ratio(), 0.5),
      PrivacyMapping::CappedEpsilon(0.3)};
  for (const auto& a1 : parts) {
    for (const auto& a2 : parts) {
      std::vector<Record> pairs;
      bool expected = true;
      for (double eps : levels) {
        pairs.push_back(ScalarRecord(eps, eps));
        if (!(At(a1, eps) + At(a2, eps) <= eps)) expected = false;
      }
      EXPECT_EQ(Certify(Compose(a1, a2), CorrelationDomain(pairs)).is_w_ahdp,
                expected);
    }
  }
}

TEST(ParseMappingTest, RoundTripsThroughDescribe) {
  for (const char* name :
       {"epsilon", "one-minus-exp", "ratio", "capped:2", "constant:0.5",
        "scaled:one-minus-exp:0.5", "scaled:capped:2:0.25"}) {
    auto m = ParseMapping(name);
    ASSERT_TRUE(m.ok()) << name << ": " << m.status();
    EXPECT_EQ(m->Describe(), name);
  }
  for (const char* bad : {"", "eps", "capped:-1", "scaled:epsilon", "capped:x",
                          "scaled:nope:2"}) {
    EXPECT_FALSE(ParseMapping(bad).ok()) << bad;
  }
}

}  // namespace
}  // namespace ahdp
