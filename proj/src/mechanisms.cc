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

#include "ahdp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ahdp/kernels.h"
#include "ahdp/laplace.h"
#include "ahdp/status_macros.h"

namespace ahdp {
namespace {

// Weight alpha(x, eps) * h_D(x, eps) of one support entry; 0 means skip.
absl::StatusOr<double> GroupWeight(const PrivacyMapping& alpha,
                                   const Record& record, uint64_t count) {
  const double a = alpha.Evaluate(record);
  if (std::isnan(a) || a < 0.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mapping ", alpha.Describe(), " is not a valid weight on ",
        EncodeRecord(record)));
  }
  if (std::isinf(a)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mapping ", alpha.Describe(), " is infinite on ", EncodeRecord(record),
        "; use a bounded mapping"));
  }
  return a * static_cast<double>(count);
}

absl::Status CheckRange(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    return absl::InvalidArgumentError(
        absl::StrCat("range requires finite l < h, got [", FormatReal(lower),
                     ", ", FormatReal(upper), "]"));
  }
  return absl::OkStatus();
}

absl::Status CheckT(double t) {
  if (!std::isfinite(t) || !(t > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("t must be finite and > 0, got ", FormatReal(t)));
  }
  return absl::OkStatus();
}

absl::Status CheckFloor(double floor) {
  if (!std::isfinite(floor) || !(floor > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("floor must be finite and > 0, got ", FormatReal(floor)));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ScalarIn(const Record& record, double lower,
                                double upper) {
  if (record.value.kind() != ValueKind::kScalar) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected scalar data, got ", EncodeRecord(record)));
  }
  const double x = record.value.scalar();
  if (!(x >= lower && x <= upper)) {
    return absl::InvalidArgumentError(
        absl::StrCat("value ", EncodeRecord(record), " outside [",
                     FormatReal(lower), ", ", FormatReal(upper), "]"));
  }
  return x;
}

absl::StatusOr<int64_t> LabelIn(const Record& record, int64_t bins) {
  if (record.value.kind() != ValueKind::kCategorical) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected categorical data, got ", EncodeRecord(record)));
  }
  const int64_t label = record.value.label();
  if (label < 1 || label > bins) {
    return absl::InvalidArgumentError(absl::StrCat(
        "label ", label, " outside 1..", bins, " in ", EncodeRecord(record)));
  }
  return label;
}

// sum of `weights` (a plain weighted count) through the shared kernel.
double KernelTotal(const std::vector<double>& weights) {
  const std::vector<double> ones(weights.size(), 1.0);
  return kernels::WeightedSum(weights, ones);
}

absl::StatusOr<size_t> InferDimension(const Dataset& dataset) {
  size_t dim = 0;
  for (const auto& [record, count] : dataset) {
    if (record.value.kind() != ValueKind::kRegression) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected regression data, got ", EncodeRecord(record)));
    }
    const size_t d = record.value.regression().covariates.size();
    if (dim == 0) dim = d;
    if (d != dim || d == 0) {
      return absl::InvalidArgumentError("inconsistent covariate dimension");
    }
  }
  if (dim == 0) {
    return absl::InvalidArgumentError(
        "cannot infer the covariate dimension of an empty dataset");
  }
  return dim;
}

// Weighted normal equations over records with nonzero weight. `weight_of`
// returns alpha * h (or h for homogeneous stages).
template <typename WeightFn>
absl::StatusOr<std::vector<double>> NormalEquations(const Dataset& dataset,
                                                    size_t dim,
                                                    WeightFn weight_of) {
  std::vector<double> rows;
  std::vector<double> targets;
  std::vector<double> weights;
  for (const auto& [record, count] : dataset) {
    if (record.value.kind() != ValueKind::kRegression) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected regression data, got ", EncodeRecord(record)));
    }
    const RegressionPoint& point = record.value.regression();
    if (point.covariates.size() != dim) {
      return absl::InvalidArgumentError(absl::StrCat(
          "record ", EncodeRecord(record), " has dimension ",
          point.covariates.size(), ", expected ", dim));
    }
    for (double x : point.covariates) {
      if (!(std::fabs(x) <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "covariate outside [-1, 1] in ", EncodeRecord(record)));
      }
    }
    if (!(std::fabs(point.target) <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("target outside [-1, 1] in ", EncodeRecord(record)));
    }
    AHDP_ASSIGN_OR_RETURN(const double w, weight_of(record, count));
    if (w == 0.0) continue;
    rows.insert(rows.end(), point.covariates.begin(), point.covariates.end());
    targets.push_back(point.target);
    weights.push_back(w);
  }
  std::vector<double> out(dim * dim + dim, 0.0);
  std::span<double> all(out);
  kernels::WeightedGram(rows, targets, weights, dim, all.first(dim * dim),
                        all.subspan(dim * dim));
  return out;
}

double Condition(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smallest = s(s.size() - 1);
  if (!std::isfinite(s(0))) return std::numeric_limits<double>::infinity();
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

absl::StatusOr<std::vector<double>> SolveOnce(const Eigen::MatrixXd& m,
                                              const Eigen::VectorXd& b,
                                              double* condition) {
  *condition = Condition(m);
  if (!(*condition <= kMaxCondition)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "system is ill-conditioned (condition ", FormatReal(*condition), ")"));
  }
  const Eigen::VectorXd x = m.fullPivLu().solve(b);
  if (!x.allFinite()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "solve produced non-finite values (condition ", FormatReal(*condition),
        ")"));
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace

absl::StatusOr<QueryFunction> QueryFunction::Create(
    std::string name, std::function<double(const DataValue&)> f, double lower,
    double upper) {
  if (!f) return absl::InvalidArgumentError("query function is empty");
  if (!std::isfinite(lower) || !std::isfinite(upper) || lower > upper) {
    return absl::InvalidArgumentError("query range requires finite l <= h");
  }
  return QueryFunction(std::move(name), std::move(f), lower, upper);
}

QueryFunction QueryFunction::Identity(double lower, double upper) {
  return QueryFunction(
      "identity",
      [](const DataValue& x) {
        switch (x.kind()) {
          case ValueKind::kScalar:
            return x.scalar();
          case ValueKind::kCategorical:
            return static_cast<double>(x.label());
          case ValueKind::kRegression:
            break;
        }
        return std::numeric_limits<double>::quiet_NaN();
      },
      lower, upper);
}

QueryFunction QueryFunction::ConstantQuery(double c) {
  return QueryFunction(
      absl::StrCat("constant:", FormatReal(c)),
      [c](const DataValue&) { return c; }, c, c);
}

std::vector<double> SampleRelease(const LaplaceRelease& release, Rng& rng,
                                  const MechanismOptions& options) {
  std::vector<double> out = release.centers;
  if (options.audit_mode) return out;
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] += LaplaceSample(rng, LaplaceScale::Create(release.scales[i]).value());
  }
  return out;
}

absl::StatusOr<LaplaceRelease> LinearQueryRelease(const Dataset& dataset,
                                                  const QueryFunction& f,
                                                  const PrivacyMapping& alpha) {
  const double l = f.lower();
  const double h = f.upper();
  AHDP_RETURN_IF_ERROR(CheckRange(l, h));
  std::vector<double> weights;
  std::vector<double> values;
  for (const auto& [record, count] : dataset) {
    const double fx = f(record.value);
    if (!(fx >= l && fx <= h)) {
      return absl::InvalidArgumentError(
          absl::StrCat(f.name(), " maps ", EncodeRecord(record), " to ",
                       FormatReal(fx), ", outside its declared range"));
    }
    AHDP_ASSIGN_OR_RETURN(const double w, GroupWeight(alpha, record, count));
    if (w == 0.0) continue;
    weights.push_back(w);
    values.push_back(fx - l);
  }
  return LaplaceRelease{{l + kernels::WeightedSum(weights, values)}, {h - l}};
}

absl::StatusOr<LaplaceRelease> CountRelease(const Dataset& dataset,
                                            const PrivacyMapping& alpha) {
  std::vector<double> weights;
  for (const auto& [record, count] : dataset) {
    AHDP_ASSIGN_OR_RETURN(const double w, GroupWeight(alpha, record, count));
    if (w != 0.0) weights.push_back(w);
  }
  return LaplaceRelease{{KernelTotal(weights)}, {1.0}};
}

absl::StatusOr<LaplaceRelease> MeanRelease(const Dataset& dataset, double lower,
                                           double upper,
                                           const PrivacyMapping& alpha1,
                                           const PrivacyMapping& alpha2) {
  AHDP_RETURN_IF_ERROR(CheckRange(lower, upper));
  std::vector<double> num_weights;
  std::vector<double> num_values;
  std::vector<double> den_weights;
  for (const auto& [record, count] : dataset) {
    AHDP_ASSIGN_OR_RETURN(const double x, ScalarIn(record, lower, upper));
    AHDP_ASSIGN_OR_RETURN(const double w1, GroupWeight(alpha1, record, count));
    AHDP_ASSIGN_OR_RETURN(const double w2, GroupWeight(alpha2, record, count));
    if (w1 != 0.0) {
      num_weights.push_back(w1);
      num_values.push_back(x - lower);
    }
    if (w2 != 0.0) den_weights.push_back(w2);
  }
  return LaplaceRelease{
      {lower + kernels::WeightedSum(num_weights, num_values),
       KernelTotal(den_weights)},
      {upper - lower, 1.0}};
}

absl::StatusOr<LaplaceRelease> FrequencyRelease(const Dataset& dataset,
                                                int64_t bins,
                                                const PrivacyMapping& alpha1,
                                                const PrivacyMapping& alpha2) {
  if (bins < 1) return absl::InvalidArgumentError("need at least one bin");
  std::vector<std::vector<double>> bin_weights(bins);
  std::vector<double> size_weights;
  for (const auto& [record, count] : dataset) {
    AHDP_ASSIGN_OR_RETURN(const int64_t label, LabelIn(record, bins));
    AHDP_ASSIGN_OR_RETURN(const double w1, GroupWeight(alpha1, record, count));
    AHDP_ASSIGN_OR_RETURN(const double w2, GroupWeight(alpha2, record, count));
    if (w1 != 0.0) bin_weights[label - 1].push_back(w1);
    if (w2 != 0.0) size_weights.push_back(w2);
  }
  LaplaceRelease release;
  for (const auto& w : bin_weights) release.centers.push_back(KernelTotal(w));
  release.centers.push_back(KernelTotal(size_weights));
  release.scales.assign(release.centers.size(), 1.0);
  return release;
}

absl::StatusOr<LaplaceRelease> RegressionRelease(const Dataset& dataset,
                                                 const PrivacyMapping& alpha,
                                                 size_t dimension) {
  if (dimension == 0) {
    AHDP_ASSIGN_OR_RETURN(dimension, InferDimension(dataset));
  }
  AHDP_ASSIGN_OR_RETURN(
      std::vector<double> centers,
      NormalEquations(dataset, dimension,
                      [&alpha](const Record& r, uint64_t c) {
                        return GroupWeight(alpha, r, c);
                      }));
  const double scale =
      static_cast<double>(dimension * dimension + dimension);
  std::vector<double> scales(centers.size(), scale);
  return LaplaceRelease{std::move(centers), std::move(scales)};
}

absl::StatusOr<MechanismReport> LinearQuery(const Dataset& dataset,
                                            const QueryFunction& f,
                                            const PrivacyMapping& alpha,
                                            Rng& rng,
                                            const MechanismOptions& options) {
  MechanismReport report;
  report.spent = alpha;
  report.seed = rng.seed();
  if (f.lower() == f.upper()) {
    // Zero-width range: the release is data independent.
    for (const auto& [record, count] : dataset) {
      AHDP_RETURN_IF_ERROR(GroupWeight(alpha, record, count).status());
    }
    report.output = {f.lower()};
    report.flags.push_back("degenerate_range");
    if (options.audit_mode) report.noiseless_part = report.output;
    return report;
  }
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease release,
                        LinearQueryRelease(dataset, f, alpha));
  report.output = SampleRelease(release, rng, options);
  if (options.audit_mode) report.noiseless_part = release.centers;
  return report;
}

absl::StatusOr<MechanismReport> SumEstimate(const Dataset& dataset,
                                            double lower, double upper,
                                            const PrivacyMapping& alpha,
                                            Rng& rng,
                                            const MechanismOptions& options) {
  AHDP_RETURN_IF_ERROR(CheckRange(lower, upper));
  for (const auto& [record, count] : dataset) {
    AHDP_RETURN_IF_ERROR(ScalarIn(record, lower, upper).status());
  }
  return LinearQuery(dataset, QueryFunction::Identity(lower, upper), alpha,
                     rng, options);
}

absl::StatusOr<MechanismReport> CountEstimate(const Dataset& dataset,
                                              const PrivacyMapping& alpha,
                                              Rng& rng,
                                              const MechanismOptions& options) {
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease release, CountRelease(dataset, alpha));
  MechanismReport report;
  report.spent = alpha;
  report.seed = rng.seed();
  report.output = SampleRelease(release, rng, options);
  if (options.audit_mode) report.noiseless_part = release.centers;
  return report;
}

absl::StatusOr<MechanismReport> MeanEstimate(const Dataset& dataset,
                                             const MeanParams& params,
                                             const PrivacyMapping& alpha1,
                                             const PrivacyMapping& alpha2,
                                             Rng& rng,
                                             const MechanismOptions& options) {
  AHDP_RETURN_IF_ERROR(CheckFloor(params.floor));
  AHDP_ASSIGN_OR_RETURN(
      LaplaceRelease release,
      MeanRelease(dataset, params.lower, params.upper, alpha1, alpha2));
  const std::vector<double> noisy = SampleRelease(release, rng, options);
  MechanismReport report;
  report.spent = Compose(alpha1, alpha2);
  report.seed = rng.seed();
  if (noisy[1] < params.floor) report.flags.push_back("denominator_floored");
  double value = noisy[0] / std::max(noisy[1], params.floor);
  if (params.clip_output) {
    const double clipped = std::clamp(value, params.lower, params.upper);
    if (clipped != value) report.flags.push_back("clipped");
    value = clipped;
  }
  report.output = {value};
  if (options.audit_mode) report.noiseless_part = release.centers;
  return report;
}

absl::StatusOr<MechanismReport> FrequencyEstimate(
    const Dataset& dataset, int64_t bins, const PrivacyMapping& alpha1,
    const PrivacyMapping& alpha2, double floor, Rng& rng,
    const MechanismOptions& options) {
  AHDP_RETURN_IF_ERROR(CheckFloor(floor));
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease release,
                        FrequencyRelease(dataset, bins, alpha1, alpha2));
  const std::vector<double> noisy = SampleRelease(release, rng, options);
  MechanismReport report;
  report.spent = Compose(alpha1, alpha2);
  report.seed = rng.seed();
  const double size = noisy.back();
  if (size < floor) report.flags.push_back("denominator_floored");
  const double denominator = std::max(size, floor);
  for (int64_t i = 0; i < bins; ++i) {
    report.output.push_back(noisy[i] / denominator);
  }
  if (options.audit_mode) report.noiseless_part = release.centers;
  return report;
}

double KeepProbability(double alpha_value, double t) {
  if (!(alpha_value > 0.0)) return 0.0;
  if (alpha_value >= t) return 1.0;
  // (e^a - 1) / (e^t - 1) rewritten so neither factor overflows.
  return std::exp(alpha_value - t) * (-std::expm1(-alpha_value)) /
         (-std::expm1(-t));
}

absl::StatusOr<Dataset> SampleSubsample(const Dataset& dataset,
                                        const PrivacyMapping& alpha, double t,
                                        Rng& rng) {
  AHDP_RETURN_IF_ERROR(CheckT(t));
  Dataset sample;
  for (const auto& [record, count] : dataset) {
    const double a = alpha.Evaluate(record);
    if (std::isnan(a) || a < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid weight on ", EncodeRecord(record)));
    }
    const double p = KeepProbability(a, t);
    uint64_t kept = 0;
    if (p >= 1.0) {
      kept = count;
    } else if (p > 0.0) {
      std::binomial_distribution<uint64_t> draw(count, p);
      kept = draw(rng);
    }
    if (kept > 0) AHDP_RETURN_IF_ERROR(sample.Insert(record, kept));
  }
  return sample;
}

SecondStage SecondStage::Sum(double lower, double upper) {
  SecondStage s;
  s.kind = Kind::kSum;
  s.lower = lower;
  s.upper = upper;
  return s;
}

SecondStage SecondStage::Count() { return SecondStage{}; }

SecondStage SecondStage::Mean(double lower, double upper, double floor) {
  SecondStage s;
  s.kind = Kind::kMean;
  s.lower = lower;
  s.upper = upper;
  s.floor = floor;
  return s;
}

SecondStage SecondStage::Histogram(int64_t bins, double floor) {
  SecondStage s;
  s.kind = Kind::kHistogram;
  s.bins = bins;
  s.floor = floor;
  return s;
}

SecondStage SecondStage::Regression(double ridge) {
  SecondStage s;
  s.kind = Kind::kRegression;
  s.ridge = ridge;
  return s;
}

const char* SecondStageName(SecondStage::Kind kind) {
  switch (kind) {
    case SecondStage::Kind::kSum:
      return "sum";
    case SecondStage::Kind::kCount:
      return "count";
    case SecondStage::Kind::kMean:
      return "mean";
    case SecondStage::Kind::kHistogram:
      return "histogram";
    case SecondStage::Kind::kRegression:
      return "regression";
  }
  return "unknown";
}

absl::StatusOr<SecondStage::Kind> ParseSecondStageKind(absl::string_view name) {
  for (auto kind : {SecondStage::Kind::kSum, SecondStage::Kind::kCount,
                    SecondStage::Kind::kMean, SecondStage::Kind::kHistogram,
                    SecondStage::Kind::kRegression}) {
    if (name == SecondStageName(kind)) return kind;
  }
  if (name == "freq") return SecondStage::Kind::kHistogram;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown stage '", name, "' (sum|count|mean|histogram|regression)"));
}

absl::StatusOr<LaplaceRelease> StageRelease(const SecondStage& stage,
                                            const Dataset& sample, double t) {
  AHDP_RETURN_IF_ERROR(CheckT(t));
  const PrivacyMapping unit = PrivacyMapping::Constant(1.0);
  switch (stage.kind) {
    case SecondStage::Kind::kSum:
    case SecondStage::Kind::kMean: {
      AHDP_RETURN_IF_ERROR(CheckRange(stage.lower, stage.upper));
      std::vector<double> weights;
      std::vector<double> values;
      for (const auto& [record, count] : sample) {
        AHDP_ASSIGN_OR_RETURN(const double x,
                              ScalarIn(record, stage.lower, stage.upper));
        weights.push_back(static_cast<double>(count));
        values.push_back(x);
      }
      const double bound =
          std::max(std::fabs(stage.lower), std::fabs(stage.upper));
      const double sum = kernels::WeightedSum(weights, values);
      if (stage.kind == SecondStage::Kind::kSum) {
        return LaplaceRelease{{sum}, {bound / t}};
      }
      const double half = t / 2.0;
      return LaplaceRelease{{sum, KernelTotal(weights)},
                            {bound / half, 1.0 / half}};
    }
    case SecondStage::Kind::kCount: {
      std::vector<double> weights;
      for (const auto& [record, count] : sample) {
        weights.push_back(static_cast<double>(count));
      }
      return LaplaceRelease{{KernelTotal(weights)}, {1.0 / t}};
    }
    case SecondStage::Kind::kHistogram: {
      if (stage.bins < 1) {
        return absl::InvalidArgumentError("need at least one bin");
      }
      std::vector<std::vector<double>> bin_weights(stage.bins);
      for (const auto& [record, count] : sample) {
        AHDP_ASSIGN_OR_RETURN(const int64_t label, LabelIn(record, stage.bins));
        bin_weights[label - 1].push_back(static_cast<double>(count));
      }
      LaplaceRelease release;
      for (const auto& w : bin_weights) {
        release.centers.push_back(KernelTotal(w));
      }
      release.scales.assign(release.centers.size(), 1.0 / t);
      return release;
    }
    case SecondStage::Kind::kRegression: {
      size_t dim = stage.dimension;
      if (dim == 0) {
        AHDP_ASSIGN_OR_RETURN(dim, InferDimension(sample));
      }
      AHDP_ASSIGN_OR_RETURN(
          std::vector<double> centers,
          NormalEquations(sample, dim, [&unit](const Record& r, uint64_t c) {
            return GroupWeight(unit, r, c);
          }));
      const double scale = static_cast<double>(dim * dim + dim) / t;
      std::vector<double> scales(centers.size(), scale);
      return LaplaceRelease{std::move(centers), std::move(scales)};
    }
  }
  return absl::InternalError("unhandled stage");
}

absl::StatusOr<MechanismReport> SampleMechanism(
    const Dataset& dataset, const PrivacyMapping& alpha, double t,
    const SecondStage& stage, Rng& rng, const MechanismOptions& options) {
  AHDP_RETURN_IF_ERROR(CheckT(t));
  SecondStage resolved = stage;
  if (stage.kind == SecondStage::Kind::kMean ||
      stage.kind == SecondStage::Kind::kHistogram) {
    AHDP_RETURN_IF_ERROR(CheckFloor(stage.floor));
  }
  if (stage.kind == SecondStage::Kind::kRegression && resolved.dimension == 0) {
    AHDP_ASSIGN_OR_RETURN(resolved.dimension, InferDimension(dataset));
  }
  // Validate the full input up front so that a bad record is reported even
  // when the subsample happens to drop it.
  for (const auto& [record, count] : dataset) {
    const double a = alpha.Evaluate(record);
    if (std::isnan(a) || a < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid weight on ", EncodeRecord(record)));
    }
  }
  {
    Dataset everything;
    for (const auto& [record, count] : dataset) {
      AHDP_RETURN_IF_ERROR(everything.Insert(record, 1));
    }
    AHDP_RETURN_IF_ERROR(StageRelease(resolved, everything, t).status());
  }

  AHDP_ASSIGN_OR_RETURN(Dataset sample, SampleSubsample(dataset, alpha, t, rng));
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease release,
                        StageRelease(resolved, sample, t));
  const std::vector<double> noisy = SampleRelease(release, rng, options);

  MechanismReport report;
  report.spent = PrivacyMapping::Capped(alpha, t);
  report.seed = rng.seed();
  if (options.audit_mode) report.noiseless_part = release.centers;
  switch (resolved.kind) {
    case SecondStage::Kind::kSum:
    case SecondStage::Kind::kCount:
      report.output = noisy;
      break;
    case SecondStage::Kind::kMean:
      if (noisy[1] < resolved.floor) {
        report.flags.push_back("denominator_floored");
      }
      report.output = {noisy[0] / std::max(noisy[1], resolved.floor)};
      break;
    case SecondStage::Kind::kHistogram: {
      double total = 0.0;
      for (double n : noisy) total += n;
      if (total < resolved.floor) report.flags.push_back("denominator_floored");
      const double denominator = std::max(total, resolved.floor);
      for (double n : noisy) report.output.push_back(n / denominator);
      break;
    }
    case SecondStage::Kind::kRegression: {
      const size_t d = resolved.dimension;
      const std::vector<double> a(noisy.begin(), noisy.begin() + d * d);
      const std::vector<double> b(noisy.begin() + d * d, noisy.end());
      AHDP_ASSIGN_OR_RETURN(LinearSolve solve,
                            SolveRegularized(a, b, d, resolved.ridge));
      if (solve.ridge_fallback) report.flags.push_back("ridge_fallback");
      report.output = std::move(solve.theta);
      break;
    }
  }
  return report;
}

absl::StatusOr<LinearSolve> SolveRegularized(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             size_t dimension, double ridge) {
  const size_t d = dimension;
  if (d == 0 || a.size() != d * d || b.size() != d) {
    return absl::InvalidArgumentError("system shape mismatch");
  }
  if (!std::isfinite(ridge) || ridge < 0.0) {
    return absl::InvalidArgumentError("ridge must be finite and >= 0");
  }
  Eigen::MatrixXd m(d, d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) m(i, j) = a[i * d + j];
  }
  const Eigen::VectorXd rhs =
      Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(d));
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

  LinearSolve out;
  out.ridge_used = ridge;
  absl::StatusOr<std::vector<double>> theta =
      SolveOnce(m + ridge * identity, rhs, &out.condition);
  if (!theta.ok()) {
    out.ridge_fallback = true;
    out.ridge_used = ridge + kFallbackRidge;
    theta = SolveOnce(m + out.ridge_used * identity, rhs, &out.condition);
    if (!theta.ok()) {
      return absl::FailedPreconditionError(
          absl::StrCat("regression system unsolvable after ridge fallback: ",
                       theta.status().message()));
    }
  }
  out.theta = *std::move(theta);
  return out;
}

absl::StatusOr<RegressionOutput> Regression(const Dataset& dataset,
                                            const PrivacyMapping& alpha,
                                            const RegressionOptions& options,
                                            Rng& rng) {
  AHDP_ASSIGN_OR_RETURN(const size_t d, InferDimension(dataset));
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease release,
                        RegressionRelease(dataset, alpha, d));
  std::vector<double> noisy = SampleRelease(release, rng, options.mechanism);
  std::vector<double> a(noisy.begin(), noisy.begin() + d * d);
  std::vector<double> b(noisy.begin() + d * d, noisy.end());
  if (options.symmetrize) {
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = i + 1; j < d; ++j) {
        const double avg = (a[i * d + j] + a[j * d + i]) / 2.0;
        a[i * d + j] = avg;
        a[j * d + i] = avg;
      }
    }
  }
  AHDP_ASSIGN_OR_RETURN(LinearSolve solve,
                        SolveRegularized(a, b, d, options.ridge));
  RegressionOutput out;
  out.theta = std::move(solve.theta);
  out.condition = solve.condition;
  out.ridge_used = solve.ridge_used;
  out.ridge_fallback = solve.ridge_fallback;
  out.spent = alpha;
  out.seed = rng.seed();
  if (options.mechanism.audit_mode) {
    out.a = std::move(a);
    out.b = std::move(b);
  }
  return out;
}

}  // namespace ahdp
