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

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ahdp/laplace.h"
#include "ahdp/status_macros.h"

namespace ahdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBruteForceTolerance = 1e-6;

double LogDensity(double x, double center, double scale) {
  return LaplaceLogDensity(x - center, LaplaceScale::Create(scale).value());
}

// log Pr[L(scale) <= x], accurate in both tails.
double LogCdf(double x, double scale) {
  if (x < 0) return std::log(0.5) + x / scale;
  return std::log1p(-0.5 * std::exp(-x / scale));
}

struct Interval {
  double lo;
  double hi;
};

Interval ProbeInterval(double c1, double c2, double scale) {
  return {std::min(c1, c2) - kGridScales * scale,
          std::max(c1, c2) + kGridScales * scale};
}

// Deterministic grid, both centers, then `probes` random points.
std::vector<double> Probes(double c1, double c2, double scale, int probes,
                           Rng& rng) {
  const Interval iv = ProbeInterval(c1, c2, scale);
  std::vector<double> out;
  for (int i = 0; i < kGridPoints; ++i) {
    out.push_back(iv.lo + (iv.hi - iv.lo) * i / (kGridPoints - 1));
  }
  out.push_back(c1);
  out.push_back(c2);
  for (int i = 0; i < probes; ++i) {
    out.push_back(iv.lo + (iv.hi - iv.lo) * rng.Uniform());
  }
  return out;
}

double CoordinateMax(double c1, double c2, double scale, int probes,
                     Rng& rng) {
  if (scale == 0.0) return c1 == c2 ? 0.0 : kInf;
  double worst = 0.0;
  for (double s : Probes(c1, c2, scale, probes, rng)) {
    worst = std::max(worst, std::fabs(LogDensity(s, c1, scale) -
                                      LogDensity(s, c2, scale)));
  }
  return worst;
}

absl::Status CheckProbes(int probes) {
  if (probes < 0) return absl::InvalidArgumentError("probes must be >= 0");
  return absl::OkStatus();
}

absl::StatusOr<std::pair<LaplaceRelease, LaplaceRelease>> ReleasePair(
    const AuditSpec& spec, const Dataset& d, const Dataset& d2) {
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease r1, AuditedRelease(spec, d));
  AHDP_ASSIGN_OR_RETURN(LaplaceRelease r2, AuditedRelease(spec, d2));
  if (r1.centers.size() != r2.centers.size() || r1.scales != r2.scales) {
    return absl::InternalError(
        "releases on the two datasets have different shapes or scales");
  }
  return std::make_pair(std::move(r1), std::move(r2));
}

absl::StatusOr<double> ObservedRatio(const AuditSpec& spec, const Dataset& d,
                                     const Dataset& d2, int probes, Rng& rng) {
  AHDP_ASSIGN_OR_RETURN(auto releases, ReleasePair(spec, d, d2));
  const auto& [r1, r2] = releases;
  double observed = 0.0;
  for (size_t j = 0; j < r1.centers.size(); ++j) {
    observed +=
        CoordinateMax(r1.centers[j], r2.centers[j], r1.scales[j], probes, rng);
  }
  return observed;
}

std::string ProbeText(int probes) {
  return absl::StrCat(kGridPoints, " grid + 2 centers + ", probes,
                      " random per coordinate");
}

absl::StatusOr<SecondStage> ResolveStage(SecondStage stage,
                                         const Dataset& dataset) {
  if (stage.kind != SecondStage::Kind::kRegression || stage.dimension != 0) {
    return stage;
  }
  for (const auto& [record, count] : dataset) {
    if (record.value.kind() == ValueKind::kRegression) {
      stage.dimension = record.value.regression().covariates.size();
      return stage;
    }
  }
  return absl::InvalidArgumentError(
      "cannot infer the regression dimension of an empty dataset");
}

// Log mixture density over all inclusion patterns, at every grid point.
absl::StatusOr<std::vector<double>> MixtureLogDensities(
    const Dataset& dataset, const PrivacyMapping& alpha, double t,
    const SecondStage& stage, const std::vector<std::vector<double>>& grid) {
  if (dataset.size() > kMaxBruteForceSize + 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "brute force needs at most ", kMaxBruteForceSize, " users, got ",
        dataset.size()));
  }
  std::vector<Record> users;
  std::vector<double> log_keep;
  std::vector<double> log_drop;
  for (const auto& [record, count] : dataset) {
    const double a = alpha.Evaluate(record);
    if (std::isnan(a) || std::isinf(a)) {
      return absl::InvalidArgumentError(
          absl::StrCat("infinite or undefined alpha at ", EncodeRecord(record)));
    }
    const double p = KeepProbability(a, t);
    for (uint64_t c = 0; c < count; ++c) {
      users.push_back(record);
      log_keep.push_back(std::log(p));
      log_drop.push_back(std::log1p(-p));
    }
  }
  const size_t n = users.size();
  std::vector<std::vector<double>> terms(grid.size());
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    double log_weight = 0.0;
    Dataset sample;
    for (size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        log_weight += log_keep[i];
        AHDP_RETURN_IF_ERROR(sample.Insert(users[i]));
      } else {
        log_weight += log_drop[i];
      }
    }
    if (std::isinf(log_weight)) continue;
    AHDP_ASSIGN_OR_RETURN(const LaplaceRelease release,
                          StageRelease(stage, sample, t));
    for (size_t g = 0; g < grid.size(); ++g) {
      if (grid[g].size() != release.centers.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "grid point has ", grid[g].size(), " coordinates; the release has ",
            release.centers.size()));
      }
      double lp = log_weight;
      for (size_t j = 0; j < release.centers.size(); ++j) {
        lp += LogDensity(grid[g][j], release.centers[j], release.scales[j]);
      }
      terms[g].push_back(lp);
    }
  }
  std::vector<double> out;
  for (const auto& t_g : terms) {
    const double m = *std::max_element(t_g.begin(), t_g.end());
    double s = 0.0;
    for (double v : t_g) s += std::exp(v - m);
    out.push_back(m + std::log(s));
  }
  return out;
}

}  // namespace

AuditReport Finalize(AuditReport report) {
  report.margin = report.claimed - report.observed;
  report.pass = report.observed <= report.claimed + kAuditTolerance;
  return report;
}

absl::StatusOr<AuditTarget> ParseAuditTarget(absl::string_view name) {
  for (AuditTarget t :
       {AuditTarget::kLinearQuery, AuditTarget::kSum, AuditTarget::kCount,
        AuditTarget::kMeanParts, AuditTarget::kFrequencyVector,
        AuditTarget::kRegressionEntries, AuditTarget::kMean}) {
    if (name == AuditTargetName(t)) return t;
  }
  if (name == "linear_query") return AuditTarget::kLinearQuery;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown audit target '", name,
      "' (linear-query|sum|count|mean-parts|frequency-vector|"
      "regression-entries)"));
}

const char* AuditTargetName(AuditTarget target) {
  switch (target) {
    case AuditTarget::kLinearQuery:
      return "linear-query";
    case AuditTarget::kSum:
      return "sum";
    case AuditTarget::kCount:
      return "count";
    case AuditTarget::kMeanParts:
      return "mean-parts";
    case AuditTarget::kFrequencyVector:
      return "frequency-vector";
    case AuditTarget::kRegressionEntries:
      return "regression-entries";
    case AuditTarget::kMean:
      return "mean";
  }
  return "unknown";
}

absl::StatusOr<LaplaceRelease> AuditedRelease(const AuditSpec& spec,
                                              const Dataset& dataset) {
  switch (spec.target) {
    case AuditTarget::kLinearQuery:
    case AuditTarget::kSum:
      return LinearQueryRelease(
          dataset, QueryFunction::Identity(spec.lower, spec.upper),
          spec.alpha1);
    case AuditTarget::kCount:
      return CountRelease(dataset, spec.alpha1);
    case AuditTarget::kMeanParts:
      return MeanRelease(dataset, spec.lower, spec.upper, spec.alpha1,
                         spec.alpha2);
    case AuditTarget::kFrequencyVector:
      return FrequencyRelease(dataset, spec.bins, spec.alpha1, spec.alpha2);
    case AuditTarget::kRegressionEntries:
      return RegressionRelease(dataset, spec.alpha1, spec.dimension);
    case AuditTarget::kMean:
      return absl::FailedPreconditionError(
          "the divided mean has no closed-form density; audit 'mean-parts' "
          "instead (the division is post-processing)");
  }
  return absl::InternalError("unhandled audit target");
}

absl::StatusOr<PrivacyMapping> ClaimedMapping(const AuditSpec& spec) {
  switch (spec.target) {
    case AuditTarget::kMeanParts:
    case AuditTarget::kFrequencyVector:
    case AuditTarget::kMean:
      return PrivacyMapping::Sum({spec.alpha1, spec.alpha2});
    default:
      return spec.alpha1;
  }
}

absl::StatusOr<AuditReport> DensityRatioAudit(const AuditSpec& spec,
                                              const Dataset& d,
                                              const Dataset& d2, int probes,
                                              Rng& rng) {
  AHDP_RETURN_IF_ERROR(CheckProbes(probes));
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping claim, ClaimedMapping(spec));
  AuditReport report;
  report.mechanism = AuditTargetName(spec.target);
  report.dataset = EncodeDataset(d);
  report.neighbor = EncodeDataset(d2);
  AHDP_ASSIGN_OR_RETURN(report.observed, ObservedRatio(spec, d, d2, probes, rng));
  report.claimed = WeightedDistance(claim, d, d2);
  report.probes = ProbeText(probes);
  return Finalize(std::move(report));
}

absl::StatusOr<AuditReport> CompositionAudit(const AuditSpec& first,
                                             const AuditSpec& second,
                                             const Dataset& d,
                                             const Dataset& d2, int probes,
                                             Rng& rng) {
  AHDP_RETURN_IF_ERROR(CheckProbes(probes));
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping c1, ClaimedMapping(first));
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping c2, ClaimedMapping(second));
  AHDP_ASSIGN_OR_RETURN(const double o1, ObservedRatio(first, d, d2, probes, rng));
  AHDP_ASSIGN_OR_RETURN(const double o2,
                        ObservedRatio(second, d, d2, probes, rng));
  AuditReport report;
  report.mechanism = absl::StrCat(AuditTargetName(first.target), "+",
                                  AuditTargetName(second.target));
  report.dataset = EncodeDataset(d);
  report.neighbor = EncodeDataset(d2);
  // Independent runs: the joint log ratio is the sum of the two.
  report.observed = o1 + o2;
  report.claimed = WeightedDistance(PrivacyMapping::Sum({c1, c2}), d, d2);
  report.probes = ProbeText(probes);
  return Finalize(std::move(report));
}

absl::StatusOr<AuditReport> ClippedLinearQueryAudit(
    const AuditSpec& spec, double clip_lower, double clip_upper,
    const Dataset& d, const Dataset& d2, int probes, Rng& rng) {
  AHDP_RETURN_IF_ERROR(CheckProbes(probes));
  if (!(clip_lower < clip_upper)) {
    return absl::InvalidArgumentError("clip interval must be non-empty");
  }
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping claim, ClaimedMapping(spec));
  AHDP_ASSIGN_OR_RETURN(auto releases, ReleasePair(spec, d, d2));
  const auto& [r1, r2] = releases;
  if (r1.centers.size() != 1) {
    return absl::InvalidArgumentError("clipped audit needs a scalar release");
  }
  const double c1 = r1.centers[0];
  const double c2 = r2.centers[0];
  const double scale = r1.scales[0];
  AuditReport report;
  report.mechanism = absl::StrCat("clip[", FormatReal(clip_lower), ",",
                                  FormatReal(clip_upper), "](",
                                  AuditTargetName(spec.target), ")");
  report.dataset = EncodeDataset(d);
  report.neighbor = EncodeDataset(d2);
  report.claimed = WeightedDistance(claim, d, d2);
  report.probes = absl::StrCat(ProbeText(probes), ", interior only; 2 atoms");
  if (scale == 0.0) {
    report.observed = c1 == c2 ? 0.0 : kInf;
    return Finalize(std::move(report));
  }
  double worst = 0.0;
  for (double s : Probes(c1, c2, scale, probes, rng)) {
    if (s <= clip_lower || s >= clip_upper) continue;
    worst = std::max(worst, std::fabs(LogDensity(s, c1, scale) -
                                      LogDensity(s, c2, scale)));
  }
  worst = std::max(worst, std::fabs(LogCdf(clip_lower - c1, scale) -
                                    LogCdf(clip_lower - c2, scale)));
  worst = std::max(worst, std::fabs(LogCdf(c1 - clip_upper, scale) -
                                    LogCdf(c2 - clip_upper, scale)));
  report.observed = worst;
  return Finalize(std::move(report));
}

absl::StatusOr<double> SampleMechanismLogDensity(
    const Dataset& dataset, const PrivacyMapping& alpha, double t,
    const SecondStage& stage, const std::vector<double>& point) {
  AHDP_ASSIGN_OR_RETURN(const SecondStage resolved, ResolveStage(stage, dataset));
  AHDP_ASSIGN_OR_RETURN(
      const std::vector<double> out,
      MixtureLogDensities(dataset, alpha, t, resolved, {point}));
  return out[0];
}

absl::StatusOr<std::vector<std::vector<double>>> SampleMechanismGrid(
    const Dataset& dataset, double t, const SecondStage& stage, int count) {
  if (count < 2) return absl::InvalidArgumentError("need at least 2 points");
  AHDP_ASSIGN_OR_RETURN(const SecondStage resolved, ResolveStage(stage, dataset));
  AHDP_ASSIGN_OR_RETURN(const LaplaceRelease empty,
                        StageRelease(resolved, Dataset(), t));
  AHDP_ASSIGN_OR_RETURN(const LaplaceRelease full,
                        StageRelease(resolved, dataset, t));
  std::vector<std::vector<double>> grid(count);
  for (size_t j = 0; j < full.centers.size(); ++j) {
    const Interval iv =
        ProbeInterval(empty.centers[j], full.centers[j], full.scales[j]);
    for (int i = 0; i < count; ++i) {
      grid[i].push_back(iv.lo + (iv.hi - iv.lo) * i / (count - 1));
    }
  }
  return grid;
}

absl::StatusOr<std::vector<AuditReport>> SampleMechanismBruteForce(
    const Dataset& dataset, const PrivacyMapping& alpha, double t,
    const SecondStage& stage, const std::vector<std::vector<double>>& grid,
    const std::vector<Record>& extra) {
  if (dataset.size() > kMaxBruteForceSize) {
    return absl::InvalidArgumentError(absl::StrCat(
        "brute force needs at most ", kMaxBruteForceSize, " users, got ",
        dataset.size()));
  }
  if (grid.empty()) return absl::InvalidArgumentError("empty grid");
  Dataset with_extra = dataset;
  for (const Record& r : extra) AHDP_RETURN_IF_ERROR(with_extra.Insert(r));
  AHDP_ASSIGN_OR_RETURN(const SecondStage resolved,
                        ResolveStage(stage, with_extra));
  AHDP_ASSIGN_OR_RETURN(const std::vector<double> base,
                        MixtureLogDensities(dataset, alpha, t, resolved, grid));
  std::vector<Record> neighbors;
  for (const auto& [record, count] : dataset) neighbors.push_back(record);
  for (const Record& r : extra) {
    if (dataset.count(r) == 0) neighbors.push_back(r);
  }
  std::vector<AuditReport> reports;
  for (const Record& r : neighbors) {
    AHDP_ASSIGN_OR_RETURN(const Dataset plus, Add(dataset, Dataset{{r, 1}}));
    AHDP_ASSIGN_OR_RETURN(const std::vector<double> other,
                          MixtureLogDensities(plus, alpha, t, resolved, grid));
    AuditReport report;
    report.mechanism = absl::StrCat("sample-mech:", SecondStageName(resolved.kind));
    report.dataset = EncodeDataset(dataset);
    report.neighbor = EncodeDataset(plus);
    report.claimed = std::min(alpha.Evaluate(r), t);
    for (size_t g = 0; g < grid.size(); ++g) {
      report.observed =
          std::max(report.observed, std::fabs(other[g] - base[g]));
    }
    report.margin = report.claimed - report.observed;
    report.pass = report.observed <= report.claimed + kBruteForceTolerance;
    report.probes = absl::StrCat(grid.size(), " grid points, exact ",
                                 uint64_t{1} << dataset.size(), "-term mixture");
    reports.push_back(std::move(report));
  }
  return reports;
}

absl::StatusOr<AuditReport> PosteriorOddsAudit(const AuditSpec& spec,
                                               const Dataset& observed,
                                               const Record& record,
                                               double prior_odds, int probes,
                                               Rng& rng) {
  if (!(prior_odds > 0.0) || std::isinf(prior_odds)) {
    return absl::InvalidArgumentError("prior odds must be positive and finite");
  }
  AHDP_RETURN_IF_ERROR(CheckProbes(probes));
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping claim, ClaimedMapping(spec));
  AHDP_ASSIGN_OR_RETURN(const Dataset plus, Add(observed, Dataset{{record, 1}}));
  AHDP_ASSIGN_OR_RETURN(auto releases, ReleasePair(spec, observed, plus));
  const auto& [r0, r1] = releases;
  const size_t dims = r0.centers.size();

  // Joint probes: the i-th grid point in every coordinate, both centers,
  // and uniform random points in the per-coordinate box.
  std::vector<Interval> box;
  for (size_t j = 0; j < dims; ++j) {
    box.push_back(ProbeInterval(r0.centers[j], r1.centers[j], r0.scales[j]));
  }
  std::vector<std::vector<double>> points = {r0.centers, r1.centers};
  for (int i = 0; i < kGridPoints + probes; ++i) {
    std::vector<double> p;
    for (size_t j = 0; j < dims; ++j) {
      const double u = i < kGridPoints
                           ? static_cast<double>(i) / (kGridPoints - 1)
                           : rng.Uniform();
      p.push_back(box[j].lo + (box[j].hi - box[j].lo) * u);
    }
    points.push_back(std::move(p));
  }

  const double log_prior = std::log(prior_odds);
  double worst = 0.0;
  for (const auto& p : points) {
    double lp0 = 0.0;
    double lp1 = 0.0;
    for (size_t j = 0; j < dims; ++j) {
      if (r0.scales[j] == 0.0) {
        if (r0.centers[j] != r1.centers[j]) lp0 = lp1 = kInf;
        continue;
      }
      lp0 += LogDensity(p[j], r0.centers[j], r0.scales[j]);
      lp1 += LogDensity(p[j], r1.centers[j], r1.scales[j]);
    }
    if (std::isinf(lp0)) {
      worst = kInf;
      break;
    }
    // Posterior odds from the joint weights prior * p1 : p0.
    const double m = std::max(log_prior + lp1, lp0);
    const double posterior_odds =
        std::exp(log_prior + lp1 - m) / std::exp(lp0 - m);
    worst = std::max(worst, std::fabs(std::log(posterior_odds) - log_prior));
  }
  AuditReport report;
  report.mechanism = absl::StrCat("posterior-odds:", AuditTargetName(spec.target));
  report.dataset = EncodeDataset(observed);
  report.neighbor = EncodeDataset(plus);
  report.claimed = claim.Evaluate(record);
  report.observed = worst;
  report.probes = absl::StrCat(points.size(), " joint points, prior odds ",
                               FormatReal(prior_odds));
  return Finalize(std::move(report));
}

absl::StatusOr<FrontierSample> EmpiricalFrontier(const AuditSpec& spec,
                                                 const Dataset& d,
                                                 const Dataset& d2,
                                                 double threshold, int trials,
                                                 Rng& rng) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping claim, ClaimedMapping(spec));
  AHDP_ASSIGN_OR_RETURN(auto releases, ReleasePair(spec, d, d2));
  const auto& [r1, r2] = releases;
  if (r1.centers.size() != 1) {
    return absl::InvalidArgumentError("frontier check needs a scalar release");
  }
  int rejects = 0;
  int accepts = 0;
  for (int i = 0; i < trials; ++i) {
    if (SampleRelease(r1, rng, {})[0] > threshold) ++rejects;
    if (SampleRelease(r2, rng, {})[0] <= threshold) ++accepts;
  }
  FrontierSample out;
  out.type1 = static_cast<double>(rejects) / trials;
  out.type2 = static_cast<double>(accepts) / trials;
  out.distance = WeightedDistance(claim, d, d2);
  const double growth = std::exp(out.distance);
  out.slack = out.type1 + growth * out.type2 - 1.0;
  const double var = out.type1 * (1 - out.type1) / trials +
                     growth * growth * out.type2 * (1 - out.type2) / trials;
  out.tolerance = 3.0 * std::sqrt(var) + 1e-12;
  out.satisfied = out.slack >= -out.tolerance;
  return out;
}

double HdpPitfallMechanism(const std::vector<std::pair<int, double>>& users,
                           Rng& rng) {
  double norm = 0.0;
  double dot = 0.0;
  for (const auto& [x, eps] : users) {
    norm += eps;
    dot += eps * x;
  }
  const double scale = 1.0 / norm;
  if (!std::isfinite(scale)) return rng.Uniform() < 0.5 ? -1.0 : 3.0;
  const double raw =
      dot / norm + LaplaceSample(rng, LaplaceScale::Create(scale).value());
  return std::clamp(raw, -1.0, 3.0);
}

absl::StatusOr<double> HdpPitfallDemo(int n, double eps_large, int trials,
                                      Rng& rng) {
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (!(eps_large >= 0.0) || std::isinf(eps_large)) {
    return absl::InvalidArgumentError("eps_large must be finite and >= 0");
  }
  int correct = 0;
  for (int i = 0; i < trials; ++i) {
    const bool all_private = rng.Uniform() < 0.5;
    const int public_users =
        all_private ? 0 : 1 + static_cast<int>(rng.UniformInt(n));
    std::vector<std::pair<int, double>> users;
    for (int u = 0; u < n; ++u) {
      users.emplace_back(u < public_users ? std::pair<int, double>{0, eps_large}
                                          : std::pair<int, double>{1, 0.0});
    }
    const double out = HdpPitfallMechanism(users, rng);
    const bool guess =
        std::min(std::fabs(out + 1.0), std::fabs(out - 3.0)) < 0.5;
    if (guess == all_private) ++correct;
  }
  return static_cast<double>(correct) / trials;
}

std::pair<Dataset, Dataset> RandomAuditPair(const AuditSpec& spec, Rng& rng,
                                            int max_size, int max_support) {
  constexpr double kDemands[] = {0.0, 0.25, 1.0, 3.0, 7.5};
  auto random_record = [&]() {
    const double eps = kDemands[rng.UniformInt(std::size(kDemands))];
    switch (spec.target) {
      case AuditTarget::kCount:
        return ScalarRecord(static_cast<double>(rng.UniformInt(3)), eps);
      case AuditTarget::kFrequencyVector:
        return CategoryRecord(
            1 + static_cast<int64_t>(rng.UniformInt(spec.bins)), eps);
      case AuditTarget::kRegressionEntries: {
        std::vector<double> x(spec.dimension);
        for (double& v : x) v = 2 * rng.Uniform() - 1;
        return Record{DataValue::Regression(x, 2 * rng.Uniform() - 1),
                      PrivacyLevel(eps)};
      }
      default: {
        const double u = static_cast<double>(rng.UniformInt(3)) / 2;
        return ScalarRecord(spec.lower + (spec.upper - spec.lower) * u, eps);
      }
    }
  };
  std::vector<Record> pool;
  const int support = 1 + static_cast<int>(rng.UniformInt(max_support));
  for (int i = 0; i < support; ++i) pool.push_back(random_record());
  Dataset d;
  const int size = static_cast<int>(rng.UniformInt(max_size + 1));
  for (int i = 0; i < size; ++i) {
    (void)d.Insert(pool[rng.UniformInt(pool.size())]);
  }
  Dataset d2 = d;
  const int edits = 1 + static_cast<int>(rng.UniformInt(2));
  for (int e = 0; e < edits; ++e) {
    if (!d2.empty() && rng.Uniform() < 0.5) {
      auto it = d2.begin();
      std::advance(it, rng.UniformInt(d2.support_size()));
      d2 = Subtract(d2, Dataset{{it->first, 1}});
    } else {
      const Record r = rng.Uniform() < 0.5 ? pool[rng.UniformInt(pool.size())]
                                           : random_record();
      (void)d2.Insert(r);
    }
  }
  return {std::move(d), std::move(d2)};
}

}  // namespace ahdp
