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

#include "ahdp/power.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ahdp {
namespace {

using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Record> Values(int k) {
  std::vector<Record> out;
  for (int i = 0; i < k; ++i) out.push_back(ScalarRecord(i, 1));
  return out;
}

CorrelationDomain Homogeneous(int k, double eps) {
  std::vector<Record> pairs;
  for (int i = 0; i < k; ++i) pairs.push_back(ScalarRecord(i, eps));
  return CorrelationDomain(pairs);
}

void ExpectOrdered(const PowerResult& r) {
  EXPECT_LE(r.trivial_floor, r.lower + 1e-12);
  EXPECT_LE(r.lower, r.upper + 1e-12);
  EXPECT_GE(r.lower, 0.0);
  EXPECT_LE(r.upper, 1.0);
}

TEST(ReduceDomainTest, Examples) {
  auto w = ReduceDomain(CorrelationDomain(
      {ScalarRecord(0, 0), ScalarRecord(0, 2), ScalarRecord(1, 1)}));
  ASSERT_TRUE(w.ok());
  EXPECT_EQ(w->pairs(),
            CorrelationDomain({ScalarRecord(0, 0), ScalarRecord(1, 1)}).pairs());
  const CorrelationDomain single({ScalarRecord(3, 0.5)});
  EXPECT_EQ(ReduceDomain(single)->pairs(), single.pairs());
  EXPECT_FALSE(ReduceDomain(CorrelationDomain()).ok());
}

TEST(BoundTest, Swap) {
  EXPECT_DOUBLE_EQ(PowerBoundSwap(2, 0)->upper, 0.5);
  EXPECT_NEAR(PowerBoundSwap(2, 0.5)->upper, 0.62246, 1e-5);
  auto r = PowerBoundSwap(101, 0);
  EXPECT_NEAR(r->upper, 1.0 / 101, 1e-15);
  EXPECT_NEAR(r->trivial_floor, 1.0 / 101, 1e-15);
  EXPECT_FALSE(PowerBoundSwap(1, 1).ok());
  EXPECT_FALSE(PowerBoundSwap(2, -1).ok());
}

TEST(BoundTest, AddRemove) {
  auto inf = PowerBoundAddRemove(1, std::log(2.0), Horizon::kInfinity);
  ASSERT_TRUE(inf.ok());
  EXPECT_NEAR(inf->upper, 0.5, 1e-15);
  EXPECT_NEAR(inf->lower, 1.0 / 3, 1e-15);
  EXPECT_NEAR(PowerBoundAddRemove(2, 0.5, Horizon::kOne)->upper, 0.45186,
              1e-5);
  auto big = PowerBoundAddRemove(3, 60, Horizon::kInfinity);
  EXPECT_NEAR(big->upper, 1.0, 1e-12);
  EXPECT_NEAR(big->lower, 1.0, 1e-12);
  EXPECT_FALSE(PowerBoundAddRemove(2, 0, Horizon::kInfinity).ok());
  EXPECT_TRUE(PowerBoundAddRemove(2, 0, Horizon::kOne).ok());
  EXPECT_FALSE(PowerBoundAddRemove(0, 1, Horizon::kOne).ok());
}

TEST(BoundTest, Ahdp) {
  auto one = PowerBoundAhdp(
      CorrelationDomain({ScalarRecord(0, 1), ScalarRecord(1, 2)}),
      Horizon::kOne);
  EXPECT_NEAR(one->upper, 0.66525, 1e-5);
  EXPECT_NEAR(one->upper, 1 / (1 + std::exp(-1.0) + std::exp(-2.0)), 1e-15);
  auto zero = PowerBoundAhdp(
      CorrelationDomain({ScalarRecord(0, 0), ScalarRecord(1, 2)}),
      Horizon::kInfinity);
  ASSERT_TRUE(zero.ok());
  EXPECT_EQ(zero->upper, 0.0);
  EXPECT_EQ(zero->lower, 0.0);
  EXPECT_TRUE(zero->degenerate);
  // Only the smallest demand per value counts.
  auto reduced = PowerBoundAhdp(
      CorrelationDomain({ScalarRecord(0, 1), ScalarRecord(0, 5)}),
      Horizon::kOne);
  EXPECT_DOUBLE_EQ(reduced->upper, 1 / (1 + std::exp(-1.0)));
}

TEST(BoundTest, AhdpReducesToAddRemove) {
  for (int k = 1; k <= 5; ++k) {
    for (double eps : {0.25, 1.0, 3.0}) {
      for (Horizon h : {Horizon::kOne, Horizon::kInfinity}) {
        auto a = PowerBoundAhdp(Homogeneous(k, eps), h);
        auto b = PowerBoundAddRemove(k, eps, h);
        ASSERT_TRUE(a.ok() && b.ok());
        EXPECT_NEAR(a->upper, b->upper, 1e-12);
        EXPECT_NEAR(a->lower, b->lower, 1e-12);
      }
    }
  }
}

TEST(BoundTest, Pair) {
  EXPECT_EQ(PowerBoundPair(0)->upper, 0.5);
  EXPECT_EQ(PowerBoundPair(kInf)->upper, 1.0);
  EXPECT_NEAR(PowerBoundPair(1)->upper, 0.73106, 1e-5);
}

TEST(BoundTest, LowerNeverExceedsUpper) {
  for (int k = 1; k <= 10; ++k) {
    for (double eps = 0.05; eps < 12; eps *= 1.7) {
      ExpectOrdered(*PowerBoundAddRemove(k, eps, Horizon::kInfinity));
      ExpectOrdered(*PowerBoundAddRemove(k, eps, Horizon::kOne));
      if (k >= 2) ExpectOrdered(*PowerBoundSwap(k, eps));
    }
  }
}

TEST(FrontierTest, Examples) {
  EXPECT_TRUE(HypothesisFrontierCheck(0, 0.5, 0.5));
  EXPECT_FALSE(HypothesisFrontierCheck(0, 0.2, 0.2));
  EXPECT_TRUE(HypothesisFrontierCheck(std::log(2.0), 0, 0.5));
  EXPECT_FALSE(HypothesisFrontierCheck(std::log(2.0), 0, 0.49));
}

TEST(ThreatModelTest, AppendCountsAndLimit) {
  auto h2 = AppendThreatModel(Dataset(), Homogeneous(2, 1), 2,
                              PowerTarget::kExactDataset);
  ASSERT_TRUE(h2.ok());
  EXPECT_EQ(h2->hypotheses().size(), 6u);  // C(4, 2)
  EXPECT_EQ(h2->labels().size(), 6u);
  EXPECT_TRUE(std::is_sorted(h2->labels().begin(), h2->labels().end()));
  auto big = AppendThreatModel(Dataset(), Homogeneous(10, 1), 10,
                               PowerTarget::kExactDataset);
  EXPECT_EQ(big.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_FALSE(AppendThreatModel(Dataset(), Homogeneous(2, 1), -1,
                                 PowerTarget::kExactDataset)
                   .ok());
}

TEST(ThreatModelTest, ProjectionMergesLabels) {
  const CorrelationDomain w({ScalarRecord(0, 1), ScalarRecord(0, 2)});
  auto m = AppendThreatModel(Dataset(), w, 1, PowerTarget::kDataProjection);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->hypotheses().size(), 3u);
  EXPECT_EQ(m->labels().size(), 2u);
}

TEST(ThreatModelTest, RejectsDuplicatesAndEmpty) {
  EXPECT_FALSE(ThreatModel::Create({}, PowerTarget::kExactDataset, Dataset(),
                                   "")
                   .ok());
  EXPECT_FALSE(ThreatModel::Create({Dataset(), Dataset()},
                                   PowerTarget::kExactDataset, Dataset(), "")
                   .ok());
}

// Independent k x k randomized-response table.
double RrPower(int k, double eps) {
  std::vector<std::vector<double>> p(k, std::vector<double>(k));
  for (int i = 0; i < k; ++i) {
    double z = 0;
    for (int j = 0; j < k; ++j) z += (p[i][j] = i == j ? 1 : std::exp(-eps));
    for (int j = 0; j < k; ++j) p[i][j] /= z;
  }
  double worst = 1;
  for (int i = 0; i < k; ++i) worst = std::min(worst, p[i][i]);
  return worst;
}

TEST(ExactPowerTest, RandomizedResponseMatchesClosedForm) {
  for (int k = 2; k <= 6; ++k) {
    auto model = SwapThreatModel(Dataset(), Values(k));
    ASSERT_TRUE(model.ok());
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      const ExponentialSpec spec{
          .kind = ExponentialKind::kSwapRandomizedResponse, .epsilon = eps};
      const DiscreteMechanism rr = MakeExponentialMechanism(*model, spec);
      const double closed = PowerBoundSwap(k, eps)->upper;
      EXPECT_NEAR(RrPower(k, eps), closed, 1e-12);
      for (Classifier c : {Classifier::kIdentity, Classifier::kBayesOptimal,
                           Classifier::kMaximumLikelihood}) {
        auto power = ExactPower(rr, *model, c);
        ASSERT_TRUE(power.ok()) << power.status();
        EXPECT_NEAR(*power->exact, closed, 1e-12) << k << " " << eps;
      }
    }
  }
}

TEST(ExactPowerTest, ZeroEpsilonGivesTrivialFloor) {
  auto model = SwapThreatModel(Dataset(), Values(4));
  const DiscreteMechanism rr = MakeExponentialMechanism(
      *model, {.kind = ExponentialKind::kSwapRandomizedResponse, .epsilon = 0});
  auto power = ExactPower(rr, *model, Classifier::kBayesOptimal);
  EXPECT_NEAR(*power->exact, power->trivial_floor, 1e-12);
  EXPECT_EQ(power->trivial_floor, 0.25);
}

TEST(ExactPowerTest, AddRemoveOnH1) {
  for (int k = 1; k <= 4; ++k) {
    const double eps = 0.7;
    auto model = AppendThreatModel(Dataset(), Homogeneous(k, eps), 1,
                                   PowerTarget::kExactDataset);
    const ExponentialSpec spec{.kind = ExponentialKind::kAddRemove};
    auto dist = ExponentialDistribution(Dataset(), *model, spec);
    ASSERT_TRUE(dist.ok());
    EXPECT_NEAR(dist->at(EncodeDataset(Dataset())),
                1 / (1 + k * std::exp(-eps)), 1e-14);
    auto power = ExactPower(MakeExponentialMechanism(*model, spec), *model,
                            Classifier::kIdentity);
    EXPECT_NEAR(*power->exact, PowerBoundAddRemove(k, eps, Horizon::kOne)->upper,
                1e-12);
  }
}

TEST(ExactPowerTest, AddRemoveTruncationTrend) {
  for (int k = 1; k <= 3; ++k) {
    for (double eps : {0.5, 1.0, 2.0}) {
      const double limit =
          PowerBoundAddRemove(k, eps, Horizon::kInfinity)->lower;
      double previous = 1.0 + 1e-12;
      for (int t = 0; t <= 6; ++t) {
        auto model = AppendThreatModel(Dataset(), Homogeneous(k, eps), t,
                                       PowerTarget::kExactDataset);
        ASSERT_TRUE(model.ok());
        auto power = ExactPower(
            MakeExponentialMechanism(*model,
                                     {.kind = ExponentialKind::kAddRemove}),
            *model, Classifier::kIdentity);
        ASSERT_TRUE(power.ok());
        EXPECT_LE(*power->exact, previous + 1e-12) << k << " " << eps << " " << t;
        EXPECT_GE(*power->exact, limit - 1e-12) << k << " " << eps << " " << t;
        previous = *power->exact;
      }
    }
  }
}

TEST(ExactPowerTest, ProjectedOnPairModel) {
  for (double eps : {0.0, 0.3, 1.0, 4.0}) {
    const Record r = ScalarRecord(5, eps);
    const Dataset observed{{ScalarRecord(1, 2), 3}};
    auto model = PairThreatModel(observed, r, PowerTarget::kDataProjection);
    ASSERT_TRUE(model.ok());
    const ExponentialSpec spec{.kind = ExponentialKind::kProjected,
                               .domain = CorrelationDomain({r})};
    auto power = ExactPower(MakeExponentialMechanism(*model, spec), *model,
                            Classifier::kIdentity);
    ASSERT_TRUE(power.ok()) << power.status();
    EXPECT_NEAR(*power->exact, PowerBoundPair(eps)->upper, 1e-12);
  }
}

TEST(ExactPowerTest, ProjectedMeetsAhdpLowerBound) {
  const CorrelationDomain w(
      {ScalarRecord(0, 0.5), ScalarRecord(0, 3), ScalarRecord(1, 1.5)});
  const double limit = PowerBoundAhdp(w, Horizon::kInfinity)->lower;
  for (int t = 0; t <= 5; ++t) {
    auto model = AppendThreatModel(Dataset(), w, t,
                                   PowerTarget::kDataProjection);
    ASSERT_TRUE(model.ok());
    auto power = ExactPower(
        MakeExponentialMechanism(
            *model, {.kind = ExponentialKind::kProjected, .domain = w}),
        *model, Classifier::kIdentity);
    ASSERT_TRUE(power.ok());
    EXPECT_GE(*power->exact, limit - 1e-12) << t;
  }
}

TEST(ExactPowerTest, ProjectedNeedsProjectionTarget) {
  auto model = PairThreatModel(Dataset(), ScalarRecord(0, 1),
                               PowerTarget::kExactDataset);
  auto dist = ExponentialDistribution(
      Dataset(), *model,
      {.kind = ExponentialKind::kProjected,
       .domain = CorrelationDomain({ScalarRecord(0, 1)})});
  EXPECT_EQ(dist.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(ExactPowerTest, LeakLengthHasPowerOne) {
  for (double eps : {0.0, 1.0}) {
    auto model = PairThreatModel(Dataset{{ScalarRecord(1, 1), 4}},
                                 ScalarRecord(0, eps),
                                 PowerTarget::kExactDataset);
    for (Classifier c :
         {Classifier::kBayesOptimal, Classifier::kMaximumLikelihood}) {
      auto power = ExactPower(LeakLengthMechanism(), *model, c);
      ASSERT_TRUE(power.ok());
      EXPECT_EQ(*power->exact, 1.0);
    }
  }
}

TEST(ExactPowerTest, ExactSizeDemoHasPowerOne) {
  const DemoModel demo = ExactSizeSideInformationDemo();
  EXPECT_EQ(demo.model.labels().size(), 2u);
  for (const Dataset& h : demo.model.hypotheses()) {
    EXPECT_EQ(h.size(), demo.model.hypotheses()[0].size());
  }
  auto power = ExactPower(demo.mechanism, demo.model,
                          Classifier::kBayesOptimal);
  ASSERT_TRUE(power.ok());
  EXPECT_EQ(*power->exact, 1.0);
}

TEST(ExactPowerTest, RejectsImproperDistributions) {
  auto model = PairThreatModel(Dataset(), ScalarRecord(0, 1),
                               PowerTarget::kExactDataset);
  const DiscreteMechanism bad{
      "bad", [](const Dataset&) -> absl::StatusOr<OutputDistribution> {
        return OutputDistribution{{"a", 0.5}, {"b", 0.4}};
      }};
  auto power = ExactPower(bad, *model, Classifier::kBayesOptimal);
  EXPECT_EQ(power.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(power.status().message(), HasSubstr("sum"));
}

// Best deterministic classifier by brute force over all output->label maps.
double BestDeterministic(const std::vector<std::vector<double>>& p,
                         const std::vector<size_t>& truth, size_t labels) {
  const size_t outputs = p[0].size();
  std::vector<size_t> psi(outputs, 0);
  double best = 0;
  while (true) {
    double worst = 1;
    for (size_t i = 0; i < p.size(); ++i) {
      double s = 0;
      for (size_t y = 0; y < outputs; ++y) {
        if (psi[y] == truth[i]) s += p[i][y];
      }
      worst = std::min(worst, s);
    }
    best = std::max(best, worst);
    size_t j = 0;
    while (j < outputs && ++psi[j] == labels) psi[j++] = 0;
    if (j == outputs) return best;
  }
}

TEST(ExactPowerTest, BayesDominatesDeterministicClassifiers) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 3;
    const int outputs = 2 + trial % 4;
    auto model = SwapThreatModel(Dataset(), Values(k));
    std::map<std::string, std::vector<double>> rows;
    std::vector<std::vector<double>> table;
    std::vector<size_t> truth;
    for (const Dataset& h : model->hypotheses()) {
      std::vector<double> row(outputs);
      double z = 0;
      for (double& v : row) z += (v = rng.Uniform() + 0.01);
      for (double& v : row) v /= z;
      rows[EncodeDataset(h)] = row;
      table.push_back(row);
      truth.push_back(std::find(model->labels().begin(),
                                model->labels().end(), model->LabelOf(h)) -
                      model->labels().begin());
    }
    const DiscreteMechanism m{
        "table", [rows](const Dataset& d) -> absl::StatusOr<OutputDistribution> {
          OutputDistribution out;
          const auto& row = rows.at(EncodeDataset(d));
          for (size_t y = 0; y < row.size(); ++y) {
            out["y" + std::to_string(y)] = row[y];
          }
          return out;
        }};
    const double det = BestDeterministic(table, truth, k);
    auto bayes = ExactPower(m, *model, Classifier::kBayesOptimal);
    auto ml = ExactPower(m, *model, Classifier::kMaximumLikelihood);
    ASSERT_TRUE(bayes.ok() && ml.ok());
    EXPECT_GE(*bayes->exact, det - 1e-12);
    EXPECT_GE(det, *ml->exact - 1e-12);
    EXPECT_GE(*bayes->exact, 1.0 / k - 1e-12);
    EXPECT_LE(*bayes->exact, 1.0 + 1e-12);
  }
}

TEST(ExponentialMechanismTest, SwapUniformAtZero) {
  auto model = SwapThreatModel(Dataset(), Values(2));
  auto dist = ExponentialDistribution(
      model->hypotheses()[0], *model,
      {.kind = ExponentialKind::kSwapRandomizedResponse, .epsilon = 0});
  for (const auto& [label, p] : *dist) EXPECT_DOUBLE_EQ(p, 0.5);
}

TEST(ExponentialMechanismTest, SamplingMatchesDistribution) {
  auto model = SwapThreatModel(Dataset(), Values(3));
  const ExponentialSpec spec{.kind = ExponentialKind::kSwapRandomizedResponse,
                             .epsilon = 1};
  const Dataset d = model->hypotheses()[1];
  auto dist = ExponentialDistribution(d, *model, spec);
  Rng rng(5);
  std::map<std::string, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[*ExponentialMechanism(d, *model, spec, rng)];
  for (const auto& [label, p] : *dist) {
    EXPECT_NEAR(counts[label] / static_cast<double>(n), p,
                4 * std::sqrt(p * (1 - p) / n));
  }
  EXPECT_EQ(MostLikely(*dist), model->LabelOf(d));
}

TEST(ParseTest, HorizonAndKind) {
  EXPECT_EQ(*ParseHorizon("1"), Horizon::kOne);
  EXPECT_EQ(*ParseHorizon("inf"), Horizon::kInfinity);
  EXPECT_FALSE(ParseHorizon("2").ok());
  EXPECT_EQ(*ParseExponentialKind("projected"), ExponentialKind::kProjected);
  EXPECT_FALSE(ParseExponentialKind("rr").ok());
}

}  // namespace
}  // namespace ahdp
