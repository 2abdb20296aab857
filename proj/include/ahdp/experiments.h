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

// Synthetic correlated datasets and the mean / frequency / regression sweeps.

#ifndef AHDP_EXPERIMENTS_H_
#define AHDP_EXPERIMENTS_H_

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ahdp/dataset.h"
#include "ahdp/privacy.h"

namespace ahdp {

// ---- Generators -----------------------------------------------------------

inline constexpr double kWeightLower = 0.0;
inline constexpr double kWeightUpper = 150.0;
inline constexpr double kWeightMaxEpsilon = 3.0;

struct WeightOptions {
  double target_corr = -0.84;
  // Draw epsilon from the same marginal but independently of the weight.
  bool independent = false;
  // Width of the logistic link between weight and epsilon, in kg.
  double link_scale = 10.0;
};

// Weight ~ Normal(75, 15) clipped to [30, 150]; epsilon =
// clip(3 sigmoid(-(w - 75) / s) + tau Z, 0, 3), both rounded to 2 decimals.
// tau is found by 20 bisection steps so that the sample correlation hits
// target_corr; fails if the target is outside the reachable range.
absl::StatusOr<Dataset> GenWeightEps(int64_t n, uint64_t seed,
                                     const WeightOptions& options = {});

double PearsonCorrelation(const std::vector<double>& a,
                          const std::vector<double>& b);

// One entry per user: (scalar value, epsilon).
void ScalarColumns(const Dataset& dataset, std::vector<double>& values,
                   std::vector<double>& epsilons);

inline constexpr int kEducationLevels = 6;
inline constexpr std::array<double, 5> kEducationEpsilons = {0.01, 0.1, 0.5,
                                                             1.0, 5.0};

// kEducationLevels x kEducationEpsilons.size() joint probabilities.
using Contingency = std::vector<std::vector<double>>;

// Higher education puts more mass on small epsilon.
Contingency DefaultEducationContingency();
// Product of uniform marginals.
Contingency UniformContingency();

absl::StatusOr<Dataset> GenEducationEps(int64_t n, uint64_t seed,
                                        const Contingency& table);

// Observed level x epsilon counts of an education dataset.
absl::StatusOr<std::vector<std::vector<double>>> EducationCounts(
    const Dataset& dataset);

struct ChiSquared {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson test of independence; empty rows and columns are dropped.
absl::StatusOr<ChiSquared> ChiSquaredIndependence(
    const std::vector<std::vector<double>>& counts);

// Attaches epsilon = e^U, U ~ Uniform(-5, 2), independently per point.
// Covariates and targets must lie in [-1, 1].
absl::StatusOr<Dataset> GenRegressionEps(
    const std::vector<RegressionPoint>& base, uint64_t seed);

// Offline stand-in for a real regression table: x ~ Uniform[-1, 1]^d,
// y = <theta*, x> + 0.1 Z, then all columns rescaled to [-1, 1].
std::vector<RegressionPoint> SyntheticRegressionBase(int64_t n, size_t dimension,
                                                     uint64_t seed);

// Numeric CSV rows; a non-numeric first row is treated as a header.
absl::StatusOr<std::vector<std::vector<double>>> ReadNumericCsv(
    std::istream& in);

// Rescales every column linearly to [-1, 1]; the last column is the target.
absl::StatusOr<std::vector<RegressionPoint>> NormalizeRegressionRows(
    const std::vector<std::vector<double>>& rows);

struct RegressionSplit {
  std::vector<RegressionPoint> train;
  std::vector<RegressionPoint> test;
};

// Random split with `test_size` points held out.
absl::StatusOr<RegressionSplit> SplitRegression(
    std::vector<RegressionPoint> points, size_t test_size, uint64_t seed);

// ---- Sweeps ---------------------------------------------------------------

// Method names:
//   lq-<family>[-half]  linear-query estimator; family is eps,
//                       one-minus-exp, ratio or const (alpha = 1); "-half"
//                       halves alpha (used for both numerator and
//                       denominator)
//   sm-t<t>             Sample Mechanism with alpha = eps and threshold t
//   non-private         exact least squares (regression only)
struct SweepMethod {
  enum class Kind { kLinearQuery, kSampleMechanism, kNonPrivate };
  std::string name;
  Kind kind = Kind::kLinearQuery;
  PrivacyMapping alpha = PrivacyMapping::Epsilon();
  double t = 0.0;
};

absl::StatusOr<SweepMethod> ParseSweepMethod(absl::string_view name);

std::vector<std::string> DefaultMeanMethods();
std::vector<std::string> DefaultFreqMethods();
std::vector<std::string> DefaultRegressionMethods();

inline constexpr int kDefaultMeanTrials = 500;
inline constexpr int kDefaultFreqTrials = 500;
inline constexpr int kDefaultRegressionTrials = 50;

struct SweepConfig {
  std::vector<int64_t> sizes;
  int trials = 1;
  std::vector<std::string> methods;
  uint64_t seed = 0;
  int threads = 1;
  bool audit_mode = false;
  // Denominator floor for mean and frequency estimates.
  double floor = 1.0;
  // Clip estimates to the known output range (post-processing).
  bool clip = true;
  double lower = kWeightLower;  // mean
  double upper = kWeightUpper;  // mean
  int64_t bins = kEducationLevels;
  double ridge = 0.0;  // regression
};

struct SweepRow {
  std::string method;
  int64_t size = 0;
  std::string metric;
  double value = 0.0;
  int trials = 0;
  uint64_t seed = 0;
};

struct SweepResult {
  std::string experiment;
  SweepConfig config;
  std::vector<SweepRow> rows;

  // Value for (method, size); NaN if absent.
  double Value(absl::string_view method, int64_t size) const;
};

// Per size and trial: subsample without replacement, run every method, and
// average the squared error against the subsample mean.
absl::StatusOr<SweepResult> MeanSweep(const Dataset& data,
                                      const SweepConfig& config);

// As MeanSweep with the l-infinity error of the relative frequencies.
absl::StatusOr<SweepResult> FreqSweep(const Dataset& data,
                                      const SweepConfig& config);

// Per size and trial: fit on a random training subset and record the mean
// squared test residual; reports the median over trials. A fit whose solve
// fails counts as an infinite residual.
absl::StatusOr<SweepResult> RegressionSweep(
    const Dataset& train, const std::vector<RegressionPoint>& test,
    const SweepConfig& config);

// method,size,metric,value,trials,seed
std::string SweepCsv(const SweepResult& result);
std::string SweepJson(const SweepResult& result);

// ---- Asymptotic bias ------------------------------------------------------

struct JointCell {
  double x = 0.0;
  double epsilon = 0.0;
  double probability = 0.0;
};

// E[X] + Cov(X, a) / E[a] for a = alpha(X, eps), i.e. E[aX] / E[a].
absl::StatusOr<double> PredictedAsymptoticMean(
    const std::vector<JointCell>& cells, const PrivacyMapping& alpha);

absl::StatusOr<double> JointMean(const std::vector<JointCell>& cells);

struct BiasEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double predicted = 0.0;
  double true_mean = 0.0;
  int reps = 0;
};

// Monte-Carlo mean of MeanEstimate (alpha for both parts, range [0, 1],
// floor 1) over `reps` i.i.d. datasets of n draws from the joint.
absl::StatusOr<BiasEstimate> AsymptoticBiasExperiment(
    const std::vector<JointCell>& cells, const PrivacyMapping& alpha,
    int64_t n, int reps, uint64_t seed);

}  // namespace ahdp

#endif  // AHDP_EXPERIMENTS_H_
