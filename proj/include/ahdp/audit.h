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

// Exact privacy audits of the Laplace releases, plus two attack demos.
//
// Every audited release is a vector of independent Laplace coordinates, so
// its log density is available in closed form. Audits compare the observed
// log density ratio on a probe grid with the claimed d_alpha bound.

#ifndef AHDP_AUDIT_H_
#define AHDP_AUDIT_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ahdp/dataset.h"
#include "ahdp/mechanisms.h"
#include "ahdp/privacy.h"
#include "ahdp/rng.h"

namespace ahdp {

inline constexpr double kAuditTolerance = 1e-9;
inline constexpr int kGridPoints = 64;
// Grid half-width around the centers, in noise scales.
inline constexpr double kGridScales = 5.0;

struct AuditReport {
  std::string mechanism;
  std::string dataset;
  std::string neighbor;
  double claimed = 0.0;
  double observed = 0.0;
  double margin = 0.0;  // claimed - observed
  bool pass = false;
  std::string probes;
};

// Fills margin and pass from claimed and observed.
AuditReport Finalize(AuditReport report);

enum class AuditTarget {
  kLinearQuery,
  kSum,
  kCount,
  kMeanParts,
  kFrequencyVector,
  kRegressionEntries,
  // The divided mean has no closed-form density; auditing it is an error.
  kMean,
};

absl::StatusOr<AuditTarget> ParseAuditTarget(absl::string_view name);
const char* AuditTargetName(AuditTarget target);

struct AuditSpec {
  AuditTarget target = AuditTarget::kLinearQuery;
  // Numerator (or only) mapping, and the denominator / total-count mapping
  // for mean-parts and frequency-vector.
  PrivacyMapping alpha1 = PrivacyMapping::Epsilon();
  PrivacyMapping alpha2 = PrivacyMapping::Epsilon();
  // Range of the identity query for linear-query, sum and mean-parts.
  double lower = 0.0;
  double upper = 1.0;
  int64_t bins = 2;      // frequency-vector
  size_t dimension = 2;  // regression-entries
};

// The release being audited.
absl::StatusOr<LaplaceRelease> AuditedRelease(const AuditSpec& spec,
                                              const Dataset& dataset);

// Total mapping the release is certified against.
absl::StatusOr<PrivacyMapping> ClaimedMapping(const AuditSpec& spec);

// Compares |log p_D(s) - log p_D2(s)| with d_alpha(D, D2). Per coordinate,
// the probes are kGridPoints uniform points spanning both centers
// +/- kGridScales scales, both centers, and `probes` random points in the
// same interval; the observed value sums the per-coordinate maxima.
absl::StatusOr<AuditReport> DensityRatioAudit(const AuditSpec& spec,
                                              const Dataset& d,
                                              const Dataset& d2, int probes,
                                              Rng& rng);

// Joint release of two independent mechanisms against d_{a1 + a2}.
absl::StatusOr<AuditReport> CompositionAudit(const AuditSpec& first,
                                             const AuditSpec& second,
                                             const Dataset& d,
                                             const Dataset& d2, int probes,
                                             Rng& rng);

// Linear query followed by Clip_[clip_lower, clip_upper]. The output law has
// atoms at both clip points; those are compared alongside the interior
// density.
absl::StatusOr<AuditReport> ClippedLinearQueryAudit(
    const AuditSpec& spec, double clip_lower, double clip_upper,
    const Dataset& d, const Dataset& d2, int probes, Rng& rng);

inline constexpr uint64_t kMaxBruteForceSize = 12;

// Exact Sample Mechanism audit. The output density is a mixture over all
// 2^n inclusion patterns of the users of D (and of each neighbor D + {r}).
// One report per neighbor r in the support of D plus `extra`; each checks
// |log ratio| <= min(alpha(r), t) + 1e-6 at every grid point.
absl::StatusOr<std::vector<AuditReport>> SampleMechanismBruteForce(
    const Dataset& dataset, const PrivacyMapping& alpha, double t,
    const SecondStage& stage, const std::vector<std::vector<double>>& grid,
    const std::vector<Record>& extra = {});

// Log density of the Sample Mechanism's output at `point`.
absl::StatusOr<double> SampleMechanismLogDensity(const Dataset& dataset,
                                                 const PrivacyMapping& alpha,
                                                 double t,
                                                 const SecondStage& stage,
                                                 const std::vector<double>& point);

// `count` points on the segment from the empty-sample center to the
// full-sample center, extended by kGridScales scales at both ends.
absl::StatusOr<std::vector<std::vector<double>>> SampleMechanismGrid(
    const Dataset& dataset, double t, const SecondStage& stage, int count);

// Posterior-to-prior odds of "D_o + {r}" against "D_o" after seeing the
// release, evaluated at grid and random joint probe points; compared with
// the claimed mapping at r.
absl::StatusOr<AuditReport> PosteriorOddsAudit(const AuditSpec& spec,
                                               const Dataset& observed,
                                               const Record& record,
                                               double prior_odds, int probes,
                                               Rng& rng);

struct FrontierSample {
  double type1 = 0.0;  // Pr[reject D | D]
  double type2 = 0.0;  // Pr[accept D | D2]
  double distance = 0.0;
  // e1 + e^d e2 >= 1 - tolerance, where the tolerance is three standard
  // errors of the Monte-Carlo estimate.
  bool satisfied = false;
  double slack = 0.0;  // e1 + e^d e2 - 1
  double tolerance = 0.0;
};

// Threshold test "first coordinate > threshold means D2" on a one-dimensional
// release, estimated from `trials` runs under each hypothesis.
absl::StatusOr<FrontierSample> EmpiricalFrontier(const AuditSpec& spec,
                                                 const Dataset& d,
                                                 const Dataset& d2,
                                                 double threshold, int trials,
                                                 Rng& rng);

// Clip_[-1,3](<eps, x> / |eps|_1 + L(1 / |eps|_1)) on data in {0, 1}. When
// |eps|_1 = 0 the noise scale is infinite and the output is the limit law:
// -1 or 3 with probability 1/2 each.
double HdpPitfallMechanism(const std::vector<std::pair<int, double>>& users,
                           Rng& rng);

// Coupling (x, eps) in {(1, 0), (0, eps_large)}. Each trial draws either the
// all-(1, 0) dataset of n users or one with a uniform number m in [1, n] of
// (0, eps_large) users, runs the mechanism, and guesses "all private" iff the
// output lies within 1/2 of a clip boundary. Returns the success rate.
absl::StatusOr<double> HdpPitfallDemo(int n, double eps_large, int trials,
                                      Rng& rng);

// Random audit pair suited to the spec's data kind: D with at most
// `max_size` users over at most `max_support` tuples, and D2 differing from
// it by up to two added or removed users.
std::pair<Dataset, Dataset> RandomAuditPair(const AuditSpec& spec, Rng& rng,
                                            int max_size = 8,
                                            int max_support = 5);

}  // namespace ahdp

#endif  // AHDP_AUDIT_H_
