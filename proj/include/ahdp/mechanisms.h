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

// Correlation-agnostic AHDP mechanisms.
//
// Each Laplace-based mechanism is split in two: a *release* function that
// computes the noiseless centers and the Laplace scales of the independent
// noise added to them, and the mechanism itself which samples the noise and
// applies any post-processing (division, flooring, solving). The release
// functions are what the auditors check; post-processing cannot weaken the
// guarantee.
//
// Weights alpha(x, eps) must be finite on every record of the input; an
// infinite weight (e.g. the `epsilon` mapping on a user with eps = inf) is
// rejected rather than silently saturated. Records with weight 0 are skipped
// before any arithmetic, so adding them leaves every release bitwise
// unchanged.

#ifndef AHDP_MECHANISMS_H_
#define AHDP_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ahdp/dataset.h"
#include "ahdp/privacy.h"
#include "ahdp/rng.h"

namespace ahdp {

// f: X -> R with declared range [lower, upper].
class QueryFunction {
 public:
  static absl::StatusOr<QueryFunction> Create(
      std::string name, std::function<double(const DataValue&)> f,
      double lower, double upper);
  // f(x) = x on scalars (and the label value on categorical data).
  static QueryFunction Identity(double lower, double upper);
  // f(x) = c, a degenerate range.
  static QueryFunction ConstantQuery(double c);

  const std::string& name() const { return name_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double operator()(const DataValue& x) const { return f_(x); }

 private:
  QueryFunction(std::string name, std::function<double(const DataValue&)> f,
                double lower, double upper)
      : name_(std::move(name)), f_(std::move(f)), lower_(lower), upper_(upper) {}
  std::string name_;
  std::function<double(const DataValue&)> f_;
  double lower_;
  double upper_;
};

struct MechanismOptions {
  // Suppresses all noise and exposes the noiseless parts. For tests and
  // audits only; the CLI never enables it unless built with
  // AHDP_CLI_AUDIT_MODE.
  bool audit_mode = false;
};

struct MechanismReport {
  std::vector<double> output;
  // Mapping the run is certified against.
  PrivacyMapping spent = PrivacyMapping::Constant(0);
  // Pre-noise statistic; present only in audit mode.
  std::optional<std::vector<double>> noiseless_part;
  uint64_t seed = 0;
  // Post-processing events, e.g. "denominator_floored", "ridge_fallback".
  std::vector<std::string> flags;

  double scalar() const { return output.at(0); }
};

// Independent Laplace noise of scale scales[i] added to centers[i].
struct LaplaceRelease {
  std::vector<double> centers;
  std::vector<double> scales;
};

// Adds the release noise (or nothing in audit mode).
std::vector<double> SampleRelease(const LaplaceRelease& release, Rng& rng,
                                  const MechanismOptions& options);

// l + sum_{T(D)} alpha (f(x) - l) h_D, with scale h - l.
// Requires lower < upper; see LinearQuery for the degenerate range.
absl::StatusOr<LaplaceRelease> LinearQueryRelease(const Dataset& dataset,
                                                  const QueryFunction& f,
                                                  const PrivacyMapping& alpha);

// sum_{T(D)} alpha h_D with scale 1.
absl::StatusOr<LaplaceRelease> CountRelease(const Dataset& dataset,
                                            const PrivacyMapping& alpha);

// [l + sum alpha1 h (x - l), sum alpha2 h] with scales [h - l, 1].
absl::StatusOr<LaplaceRelease> MeanRelease(const Dataset& dataset, double lower,
                                           double upper,
                                           const PrivacyMapping& alpha1,
                                           const PrivacyMapping& alpha2);

// [N_1, ..., N_k, S]: per-label weighted counts under alpha1 and the weighted
// size under alpha2, all with scale 1.
absl::StatusOr<LaplaceRelease> FrequencyRelease(const Dataset& dataset,
                                                int64_t bins,
                                                const PrivacyMapping& alpha1,
                                                const PrivacyMapping& alpha2);

// Row-major X^T Diag(w) X followed by X^T Diag(w) y, every entry with scale
// d^2 + d. `dimension` is inferred from the data when 0.
absl::StatusOr<LaplaceRelease> RegressionRelease(const Dataset& dataset,
                                                 const PrivacyMapping& alpha,
                                                 size_t dimension = 0);

// Linear query. When lower == upper the released value is the constant
// `lower` and no noise is drawn.
absl::StatusOr<MechanismReport> LinearQuery(const Dataset& dataset,
                                            const QueryFunction& f,
                                            const PrivacyMapping& alpha,
                                            Rng& rng,
                                            const MechanismOptions& options = {});

absl::StatusOr<MechanismReport> SumEstimate(const Dataset& dataset,
                                            double lower, double upper,
                                            const PrivacyMapping& alpha,
                                            Rng& rng,
                                            const MechanismOptions& options = {});

// Weighted count plus Laplace(1).
absl::StatusOr<MechanismReport> CountEstimate(
    const Dataset& dataset, const PrivacyMapping& alpha, Rng& rng,
    const MechanismOptions& options = {});

struct MeanParams {
  double lower = 0.0;
  double upper = 1.0;
  // Denominator is max(noisy weighted count, floor). Must be > 0.
  double floor = 1.0;
  // Optional post-processing clip of the ratio to [lower, upper].
  bool clip_output = false;
};

// Spends Compose(alpha1, alpha2).
absl::StatusOr<MechanismReport> MeanEstimate(
    const Dataset& dataset, const MeanParams& params,
    const PrivacyMapping& alpha1, const PrivacyMapping& alpha2, Rng& rng,
    const MechanismOptions& options = {});

// Relative frequencies N_i / max(S, floor) over labels 1..bins. Spends
// Compose(alpha1, alpha2).
absl::StatusOr<MechanismReport> FrequencyEstimate(
    const Dataset& dataset, int64_t bins, const PrivacyMapping& alpha1,
    const PrivacyMapping& alpha2, double floor, Rng& rng,
    const MechanismOptions& options = {});

// Probability that one user is kept by the first stage of the Sample
// Mechanism: (e^{min(alpha, t)} - 1) / (e^t - 1).
double KeepProbability(double alpha_value, double t);

// Keeps each user independently with KeepProbability(alpha(x, eps), t);
// group counts are Binomial(h_D, p).
absl::StatusOr<Dataset> SampleSubsample(const Dataset& dataset,
                                        const PrivacyMapping& alpha, double t,
                                        Rng& rng);

// Homogeneous t-DP (add-remove) mechanisms run on the subsample.
struct SecondStage {
  enum class Kind { kSum, kCount, kMean, kHistogram, kRegression };

  Kind kind = Kind::kCount;
  double lower = 0.0;  // sum, mean
  double upper = 1.0;  // sum, mean
  int64_t bins = 0;    // histogram
  double floor = 1.0;  // mean, histogram
  double ridge = 0.0;  // regression
  // Regression covariate dimension; SampleMechanism infers it from the full
  // dataset when 0.
  size_t dimension = 0;

  static SecondStage Sum(double lower, double upper);
  static SecondStage Count();
  static SecondStage Mean(double lower, double upper, double floor = 1.0);
  static SecondStage Histogram(int64_t bins, double floor = 1.0);
  static SecondStage Regression(double ridge = 0.0);
};

const char* SecondStageName(SecondStage::Kind kind);
absl::StatusOr<SecondStage::Kind> ParseSecondStageKind(absl::string_view name);

// Noiseless centers and scales of a t-DP stage on a (sub)sampled dataset:
//   sum        sum x h,                scale max(|l|, |h|) / t
//   count      sum h,                  scale 1 / t
//   mean       [sum, count],           scales at t / 2 each
//   histogram  per-label counts,       scale 1 / t
//   regression X^T X then X^T y,       scale (d^2 + d) / t
absl::StatusOr<LaplaceRelease> StageRelease(const SecondStage& stage,
                                            const Dataset& sample, double t);

// Subsample, then run the stage. Spends min(alpha, t).
absl::StatusOr<MechanismReport> SampleMechanism(
    const Dataset& dataset, const PrivacyMapping& alpha, double t,
    const SecondStage& stage, Rng& rng, const MechanismOptions& options = {});

struct RegressionOptions {
  // Added to the diagonal before solving (post-processing).
  double ridge = 0.0;
  // Replace A by (A + A^T) / 2 before solving (post-processing). Off by
  // default: the noise matrix is drawn entrywise, so A is asymmetric.
  bool symmetrize = false;
  MechanismOptions mechanism;
};

struct RegressionOutput {
  std::vector<double> theta;
  // Noisy (or, in audit mode, noiseless) A (row-major) and b; populated in
  // audit mode only.
  std::optional<std::vector<double>> a;
  std::optional<std::vector<double>> b;
  // Ratio of extreme singular values of the solved system.
  double condition = 0.0;
  double ridge_used = 0.0;
  bool ridge_fallback = false;
  PrivacyMapping spent = PrivacyMapping::Constant(0);
  uint64_t seed = 0;
};

// Condition estimates above this trigger the ridge fallback.
inline constexpr double kMaxCondition = 1e12;
inline constexpr double kFallbackRidge = 1e-6;

// Solves (A + ridge I) theta = b for a row-major d x d system, retrying with
// kFallbackRidge when the system is singular or worse conditioned than
// kMaxCondition.
struct LinearSolve {
  std::vector<double> theta;
  double condition = 0.0;
  double ridge_used = 0.0;
  bool ridge_fallback = false;
};
absl::StatusOr<LinearSolve> SolveRegularized(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             size_t dimension, double ridge);

// Functional-mechanism regression over weighted normal equations. Records
// need covariates in [-1, 1]^d and targets in [-1, 1].
absl::StatusOr<RegressionOutput> Regression(const Dataset& dataset,
                                            const PrivacyMapping& alpha,
                                            const RegressionOptions& options,
                                            Rng& rng);

}  // namespace ahdp

#endif  // AHDP_MECHANISMS_H_
