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

// Adversarial power: closed-form bounds, finite threat models, the
// exponential-weight mechanisms that attain the bounds, and exact power of
// discrete-output mechanisms by enumeration.

#ifndef AHDP_POWER_H_
#define AHDP_POWER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ahdp/dataset.h"
#include "ahdp/privacy.h"
#include "ahdp/rng.h"

namespace ahdp {

struct PowerResult {
  double upper = 1.0;
  double lower = 0.0;
  std::optional<double> exact;
  // 1 / |label space|; 0 for unbounded hypothesis sets.
  double trivial_floor = 0.0;
  // Set when some minimal demand is 0 under the infinite horizon, which
  // forces both bounds to 0.
  bool degenerate = false;
};

enum class Horizon { kOne, kInfinity };

absl::StatusOr<Horizon> ParseHorizon(absl::string_view text);

// One pair per distinct data value, carrying its smallest demand.
absl::StatusOr<CorrelationDomain> ReduceDomain(const CorrelationDomain& domain);

// Swap model with |X| = k: 1 / (1 + (k - 1) e^-eps). Requires k >= 2.
absl::StatusOr<PowerResult> PowerBoundSwap(int64_t k, double epsilon);

// Homogeneous add-remove model with |X| = k.
//   kOne       1 / (1 + k e^-eps)
//   kInfinity  upper (1 - e^-eps)^k, lower ((1 - e^-eps) / (1 + e^-eps))^k
absl::StatusOr<PowerResult> PowerBoundAddRemove(int64_t k, double epsilon,
                                                Horizon horizon);

// The same forms over W_o = ReduceDomain(W): products and sums run over the
// minimal demands.
absl::StatusOr<PowerResult> PowerBoundAhdp(const CorrelationDomain& domain,
                                           Horizon horizon);

// Single known record: 1 / (1 + e^-eps); eps may be +inf.
absl::StatusOr<PowerResult> PowerBoundPair(double epsilon);

// e1 + e^d e2 >= 1 - 1e-12.
bool HypothesisFrontierCheck(double d, double e1, double e2);

enum class PowerTarget { kExactDataset, kDataProjection };

class ThreatModel {
 public:
  // Hypotheses must be non-empty and pairwise distinct.
  static absl::StatusOr<ThreatModel> Create(std::vector<Dataset> hypotheses,
                                            PowerTarget target,
                                            Dataset observed_prefix,
                                            std::string generator);

  const std::vector<Dataset>& hypotheses() const { return hypotheses_; }
  PowerTarget target() const { return target_; }
  const Dataset& observed_prefix() const { return observed_prefix_; }
  const std::string& generator() const { return generator_; }

  // Canonical label of a dataset: its encoding, or the encoding of its data
  // projection under kDataProjection.
  std::string LabelOf(const Dataset& dataset) const;
  // Distinct labels of the hypotheses, lexicographically sorted.
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  ThreatModel() = default;
  std::vector<Dataset> hypotheses_;
  PowerTarget target_ = PowerTarget::kExactDataset;
  Dataset observed_prefix_;
  std::string generator_;
  std::vector<std::string> labels_;
};

inline constexpr size_t kMaxHypotheses = 10000;

// {D_o + {r} : r in values}: one unseen record of known size.
absl::StatusOr<ThreatModel> SwapThreatModel(const Dataset& observed,
                                            const std::vector<Record>& values);

// H_t = {D_o + S : S a multiset over W, |S| <= t}.
absl::StatusOr<ThreatModel> AppendThreatModel(const Dataset& observed,
                                              const CorrelationDomain& domain,
                                              int64_t t, PowerTarget target);

// H(x, eps) = {D_o, D_o + {(x, eps)}}.
absl::StatusOr<ThreatModel> PairThreatModel(const Dataset& observed,
                                            const Record& record,
                                            PowerTarget target);

using OutputDistribution = std::map<std::string, double>;

struct DiscreteMechanism {
  std::string name;
  std::function<absl::StatusOr<OutputDistribution>(const Dataset&)>
      distribution;
};

enum class ExponentialKind {
  // Pr[label] proportional to exp(-eps [label != label(D)]).
  kSwapRandomizedResponse,
  // Pr[D'] proportional to exp(-d_alpha(D, D')).
  kAddRemove,
  // Pr[Pi(D')] proportional to exp(-d'(Pi(D), Pi(D'))), with d' weighting
  // each data value by its smallest demand in the domain.
  kProjected,
};

absl::StatusOr<ExponentialKind> ParseExponentialKind(absl::string_view name);

struct ExponentialSpec {
  ExponentialKind kind = ExponentialKind::kAddRemove;
  double epsilon = 0.0;                                  // swap
  PrivacyMapping alpha = PrivacyMapping::Epsilon();      // add-remove
  CorrelationDomain domain{};                            // projected
};

// Output distribution over the model's labels.
absl::StatusOr<OutputDistribution> ExponentialDistribution(
    const Dataset& dataset, const ThreatModel& model,
    const ExponentialSpec& spec);

// One draw from ExponentialDistribution (labels in lexicographic order).
absl::StatusOr<std::string> ExponentialMechanism(const Dataset& dataset,
                                                 const ThreatModel& model,
                                                 const ExponentialSpec& spec,
                                                 Rng& rng);

DiscreteMechanism MakeExponentialMechanism(const ThreatModel& model,
                                           const ExponentialSpec& spec);

// Most likely label; ties go to the lexicographically smallest.
std::string MostLikely(const OutputDistribution& distribution);

enum class Classifier {
  // psi = identity on the label space.
  kIdentity,
  // Deterministic psi(y) = argmax over labels of the summed likelihoods,
  // ties to the smallest label.
  kMaximumLikelihood,
  // max over randomized psi of the worst-case success, by linear program.
  kBayesOptimal,
};

// kIdentity / kMaximumLikelihood report the classifier's worst-case success
// as `exact` and `lower`, with upper = 1; kBayesOptimal reports the power
// itself in all three fields.
absl::StatusOr<PowerResult> ExactPower(const DiscreteMechanism& mechanism,
                                       const ThreatModel& model,
                                       Classifier classifier);

// Outputs the dataset size. Satisfies the swap-model definition but
// reveals membership under add-remove threat models.
DiscreteMechanism LeakLengthMechanism();

struct DemoModel {
  ThreatModel model;
  DiscreteMechanism mechanism;
  CorrelationDomain domain;
};

// W = {(x1, 0), (x2, inf)} with the adversary knowing |D| exactly; the
// mechanism releases h_D(x2, inf), which is W-AHDP, yet has power 1.
DemoModel ExactSizeSideInformationDemo();

}  // namespace ahdp

#endif  // AHDP_POWER_H_
