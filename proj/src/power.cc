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
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ahdp/simplex.h"
#include "ahdp/status_macros.h"

namespace ahdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckEpsilon(double epsilon, bool allow_infinite) {
  if (std::isnan(epsilon) || epsilon < 0.0 ||
      (!allow_infinite && std::isinf(epsilon))) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid epsilon ", FormatReal(epsilon)));
  }
  return absl::OkStatus();
}

// 1 / (1 + s) where s = sum of e^-eps terms.
double Inverse1p(double s) { return 1.0 / (1.0 + s); }

// Infinite-horizon bounds from the per-value minimal demands.
PowerResult InfiniteHorizon(const std::vector<double>& epsilons) {
  PowerResult result;
  double upper = 1.0;
  double lower = 1.0;
  for (double eps : epsilons) {
    const double q = std::exp(-eps);
    upper *= -std::expm1(-eps);
    lower *= -std::expm1(-eps) / (1.0 + q);
    if (eps == 0.0) result.degenerate = true;
  }
  result.upper = upper;
  result.lower = lower;
  result.trivial_floor = 0.0;
  return result;
}

absl::StatusOr<uint64_t> Binomial(uint64_t n, uint64_t k, uint64_t cap) {
  // C(n, k) with early exit once it passes `cap`.
  k = std::min(k, n - k);
  long double value = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    value = value * static_cast<long double>(n - k + i) / i;
    if (value > cap) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "threat model would exceed ", cap, " hypotheses"));
    }
  }
  return static_cast<uint64_t>(std::llround(static_cast<double>(value)));
}

void EnumerateAppends(const std::vector<Record>& pairs, size_t index,
                      int64_t remaining, Dataset& current,
                      std::vector<Dataset>& out) {
  if (index == pairs.size()) {
    out.push_back(current);
    return;
  }
  for (int64_t c = 0; c <= remaining; ++c) {
    Dataset next = current;
    if (c > 0) {
      // Bounded by kMaxHypotheses, far below the multiplicity limit.
      (void)next.Insert(pairs[index], static_cast<uint64_t>(c));
    }
    EnumerateAppends(pairs, index + 1, remaining - c, next, out);
  }
}

// sum_x weight(x) |h_a(x) - h_b(x)| over data multisets; equal counts add 0.
double MultisetDistance(const std::map<DataValue, double>& weights,
                        const DataMultiset& a, const DataMultiset& b) {
  double total = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  auto add = [&](const DataValue& x, uint64_t ha, uint64_t hb) {
    if (ha == hb) return;
    auto it = weights.find(x);
    const double w = it == weights.end() ? kInf : it->second;
    if (w == 0.0) return;
    total += w * static_cast<double>(ha > hb ? ha - hb : hb - ha);
  };
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      add(ia->first, ia->second, 0);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      add(ib->first, 0, ib->second);
      ++ib;
    } else {
      add(ia->first, ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return total;
}

// Normalizes exp(-d_i) over labels, shifting by the smallest distance.
absl::StatusOr<OutputDistribution> Normalize(
    const std::vector<std::pair<std::string, double>>& distances) {
  double smallest = kInf;
  for (const auto& [label, d] : distances) smallest = std::min(smallest, d);
  if (distances.empty() || std::isinf(smallest)) {
    return absl::FailedPreconditionError(
        "every label is at infinite distance from the input");
  }
  OutputDistribution out;
  double total = 0.0;
  for (const auto& [label, d] : distances) {
    const double w = std::exp(-(d - smallest));
    out[label] += w;
    total += w;
  }
  for (auto& [label, p] : out) p /= total;
  return out;
}

absl::Status ValidateDistribution(const OutputDistribution& dist,
                                  const std::string& context) {
  double total = 0.0;
  for (const auto& [y, p] : dist) {
    if (!std::isfinite(p) || p < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid probability for output '", y, "' on ", context));
    }
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat(
        "output probabilities on ", context, " sum to ", FormatReal(total)));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Horizon> ParseHorizon(absl::string_view text) {
  if (text == "1" || text == "one") return Horizon::kOne;
  if (text == "inf" || text == "infinity") return Horizon::kInfinity;
  return absl::InvalidArgumentError(
      absl::StrCat("horizon must be 1 or inf, got '", text, "'"));
}

absl::StatusOr<CorrelationDomain> ReduceDomain(const CorrelationDomain& domain) {
  if (domain.empty()) return absl::InvalidArgumentError("empty domain");
  std::map<DataValue, PrivacyLevel> smallest;
  for (const Record& r : domain.pairs()) {
    auto [it, inserted] = smallest.emplace(r.value, r.epsilon);
    if (!inserted && r.epsilon < it->second) it->second = r.epsilon;
  }
  std::vector<Record> reduced;
  for (const auto& [x, eps] : smallest) reduced.push_back(Record{x, eps});
  return CorrelationDomain(std::move(reduced));
}

absl::StatusOr<PowerResult> PowerBoundSwap(int64_t k, double epsilon) {
  if (k < 2) return absl::InvalidArgumentError("swap bound needs k >= 2");
  AHDP_RETURN_IF_ERROR(CheckEpsilon(epsilon, true));
  PowerResult result;
  result.upper = result.lower =
      Inverse1p(static_cast<double>(k - 1) * std::exp(-epsilon));
  result.trivial_floor = 1.0 / static_cast<double>(k);
  return result;
}

absl::StatusOr<PowerResult> PowerBoundAddRemove(int64_t k, double epsilon,
                                                Horizon horizon) {
  if (k < 1) return absl::InvalidArgumentError("need k >= 1");
  AHDP_RETURN_IF_ERROR(CheckEpsilon(epsilon, true));
  if (horizon == Horizon::kOne) {
    PowerResult result;
    result.upper = result.lower =
        Inverse1p(static_cast<double>(k) * std::exp(-epsilon));
    result.trivial_floor = 1.0 / static_cast<double>(k + 1);
    return result;
  }
  if (epsilon == 0.0) {
    return absl::InvalidArgumentError(
        "infinite horizon needs epsilon > 0 (the series diverges)");
  }
  return InfiniteHorizon(std::vector<double>(k, epsilon));
}

absl::StatusOr<PowerResult> PowerBoundAhdp(const CorrelationDomain& domain,
                                           Horizon horizon) {
  AHDP_ASSIGN_OR_RETURN(const CorrelationDomain reduced, ReduceDomain(domain));
  std::vector<double> epsilons;
  for (const Record& r : reduced.pairs()) epsilons.push_back(r.epsilon.value());
  if (horizon == Horizon::kOne) {
    double s = 0.0;
    for (double eps : epsilons) s += std::exp(-eps);
    PowerResult result;
    result.upper = result.lower = Inverse1p(s);
    result.trivial_floor = 1.0 / static_cast<double>(epsilons.size() + 1);
    return result;
  }
  return InfiniteHorizon(epsilons);
}

absl::StatusOr<PowerResult> PowerBoundPair(double epsilon) {
  AHDP_RETURN_IF_ERROR(CheckEpsilon(epsilon, true));
  PowerResult result;
  result.upper = result.lower = Inverse1p(std::exp(-epsilon));
  result.trivial_floor = 0.5;
  return result;
}

bool HypothesisFrontierCheck(double d, double e1, double e2) {
  return e1 + std::exp(d) * e2 >= 1.0 - 1e-12;
}

absl::StatusOr<ThreatModel> ThreatModel::Create(std::vector<Dataset> hypotheses,
                                                PowerTarget target,
                                                Dataset observed_prefix,
                                                std::string generator) {
  if (hypotheses.empty()) {
    return absl::InvalidArgumentError("threat model has no hypotheses");
  }
  if (hypotheses.size() > kMaxHypotheses) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "threat model has ", hypotheses.size(), " hypotheses; limit is ",
        kMaxHypotheses));
  }
  ThreatModel model;
  model.target_ = target;
  std::set<std::string> encodings;
  std::set<std::string> labels;
  for (const Dataset& h : hypotheses) {
    if (!encodings.insert(EncodeDataset(h)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate hypothesis ", EncodeDataset(h)));
    }
    labels.insert(model.LabelOf(h));
  }
  model.hypotheses_ = std::move(hypotheses);
  model.observed_prefix_ = std::move(observed_prefix);
  model.generator_ = std::move(generator);
  model.labels_.assign(labels.begin(), labels.end());
  return model;
}

std::string ThreatModel::LabelOf(const Dataset& dataset) const {
  return target_ == PowerTarget::kExactDataset
             ? EncodeDataset(dataset)
             : EncodeMultiset(ProjectData(dataset));
}

absl::StatusOr<ThreatModel> SwapThreatModel(const Dataset& observed,
                                            const std::vector<Record>& values) {
  std::vector<Dataset> hypotheses;
  for (const Record& r : values) {
    AHDP_ASSIGN_OR_RETURN(Dataset h, Add(observed, Dataset{{r, 1}}));
    hypotheses.push_back(std::move(h));
  }
  return ThreatModel::Create(std::move(hypotheses), PowerTarget::kExactDataset,
                             observed, "swap: D_o + one of k records");
}

absl::StatusOr<ThreatModel> AppendThreatModel(const Dataset& observed,
                                              const CorrelationDomain& domain,
                                              int64_t t, PowerTarget target) {
  if (t < 0) return absl::InvalidArgumentError("t must be >= 0");
  if (domain.empty()) return absl::InvalidArgumentError("empty domain");
  AHDP_RETURN_IF_ERROR(Binomial(static_cast<uint64_t>(t) + domain.size(),
                                domain.size(), kMaxHypotheses)
                           .status());
  const std::vector<Record> pairs(domain.pairs().begin(), domain.pairs().end());
  std::vector<Dataset> appends;
  Dataset scratch;
  EnumerateAppends(pairs, 0, t, scratch, appends);
  std::vector<Dataset> hypotheses;
  for (const Dataset& s : appends) {
    AHDP_ASSIGN_OR_RETURN(Dataset h, Add(observed, s));
    hypotheses.push_back(std::move(h));
  }
  return ThreatModel::Create(std::move(hypotheses), target, observed,
                             absl::StrCat("append up to ", t, " records"));
}

absl::StatusOr<ThreatModel> PairThreatModel(const Dataset& observed,
                                            const Record& record,
                                            PowerTarget target) {
  AHDP_ASSIGN_OR_RETURN(Dataset plus, Add(observed, Dataset{{record, 1}}));
  return ThreatModel::Create({observed, std::move(plus)}, target, observed,
                             absl::StrCat("D_o or D_o + ", EncodeRecord(record)));
}

absl::StatusOr<ExponentialKind> ParseExponentialKind(absl::string_view name) {
  if (name == "swap-rr") return ExponentialKind::kSwapRandomizedResponse;
  if (name == "add-remove") return ExponentialKind::kAddRemove;
  if (name == "projected") return ExponentialKind::kProjected;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown exponential mechanism '", name,
      "' (swap-rr|add-remove|projected)"));
}

absl::StatusOr<OutputDistribution> ExponentialDistribution(
    const Dataset& dataset, const ThreatModel& model,
    const ExponentialSpec& spec) {
  std::vector<std::pair<std::string, double>> distances;
  switch (spec.kind) {
    case ExponentialKind::kSwapRandomizedResponse: {
      AHDP_RETURN_IF_ERROR(CheckEpsilon(spec.epsilon, false));
      const std::string own = model.LabelOf(dataset);
      for (const std::string& label : model.labels()) {
        distances.emplace_back(label, label == own ? 0.0 : spec.epsilon);
      }
      break;
    }
    case ExponentialKind::kAddRemove: {
      // Hypotheses sharing a label pool their mass.
      for (const Dataset& h : model.hypotheses()) {
        distances.emplace_back(model.LabelOf(h),
                               WeightedDistance(spec.alpha, dataset, h));
      }
      break;
    }
    case ExponentialKind::kProjected: {
      if (model.target() != PowerTarget::kDataProjection) {
        return absl::InvalidArgumentError(
            "the projected mechanism needs a data-projection threat model");
      }
      AHDP_ASSIGN_OR_RETURN(const CorrelationDomain reduced,
                            ReduceDomain(spec.domain));
      std::map<DataValue, double> weights;
      for (const Record& r : reduced.pairs()) {
        weights[r.value] = r.epsilon.value();
      }
      const DataMultiset own = ProjectData(dataset);
      std::map<std::string, DataMultiset> projections;
      for (const Dataset& h : model.hypotheses()) {
        projections.emplace(model.LabelOf(h), ProjectData(h));
      }
      for (const auto& [label, projection] : projections) {
        distances.emplace_back(label,
                               MultisetDistance(weights, own, projection));
      }
      break;
    }
  }
  return Normalize(distances);
}

absl::StatusOr<std::string> ExponentialMechanism(const Dataset& dataset,
                                                 const ThreatModel& model,
                                                 const ExponentialSpec& spec,
                                                 Rng& rng) {
  AHDP_ASSIGN_OR_RETURN(const OutputDistribution dist,
                        ExponentialDistribution(dataset, model, spec));
  const double u = rng.Uniform();
  double cumulative = 0.0;
  for (const auto& [label, p] : dist) {
    cumulative += p;
    if (u < cumulative) return label;
  }
  return dist.rbegin()->first;
}

DiscreteMechanism MakeExponentialMechanism(const ThreatModel& model,
                                           const ExponentialSpec& spec) {
  const char* names[] = {"swap-rr", "add-remove", "projected"};
  return DiscreteMechanism{
      absl::StrCat("exponential:", names[static_cast<int>(spec.kind)]),
      [model, spec](const Dataset& d) {
        return ExponentialDistribution(d, model, spec);
      }};
}

std::string MostLikely(const OutputDistribution& distribution) {
  std::string best;
  double best_p = -1.0;
  for (const auto& [label, p] : distribution) {
    if (p > best_p) {
      best = label;
      best_p = p;
    }
  }
  return best;
}

absl::StatusOr<PowerResult> ExactPower(const DiscreteMechanism& mechanism,
                                       const ThreatModel& model,
                                       Classifier classifier) {
  const std::vector<Dataset>& hypotheses = model.hypotheses();
  const std::vector<std::string>& labels = model.labels();
  std::map<std::string, size_t> label_index;
  for (size_t l = 0; l < labels.size(); ++l) label_index[labels[l]] = l;

  std::vector<OutputDistribution> table;
  std::vector<size_t> truth;
  std::set<std::string> outputs;
  for (const Dataset& h : hypotheses) {
    AHDP_ASSIGN_OR_RETURN(OutputDistribution dist, mechanism.distribution(h));
    AHDP_RETURN_IF_ERROR(ValidateDistribution(dist, EncodeDataset(h)));
    for (const auto& [y, p] : dist) outputs.insert(y);
    truth.push_back(label_index.at(model.LabelOf(h)));
    table.push_back(std::move(dist));
  }

  PowerResult result;
  result.trivial_floor = 1.0 / static_cast<double>(labels.size());

  auto prob = [&](size_t i, const std::string& y) {
    auto it = table[i].find(y);
    return it == table[i].end() ? 0.0 : it->second;
  };

  switch (classifier) {
    case Classifier::kIdentity: {
      double worst = 1.0;
      for (size_t i = 0; i < hypotheses.size(); ++i) {
        worst = std::min(worst, prob(i, labels[truth[i]]));
      }
      result.exact = result.lower = worst;
      result.upper = 1.0;
      return result;
    }
    case Classifier::kMaximumLikelihood: {
      std::map<std::string, size_t> decision;
      for (const std::string& y : outputs) {
        std::vector<double> score(labels.size(), 0.0);
        for (size_t i = 0; i < hypotheses.size(); ++i) {
          score[truth[i]] += prob(i, y);
        }
        // First strict maximum: the smallest label wins ties.
        size_t best = 0;
        for (size_t l = 1; l < labels.size(); ++l) {
          if (score[l] > score[best]) best = l;
        }
        decision[y] = best;
      }
      double worst = 1.0;
      for (size_t i = 0; i < hypotheses.size(); ++i) {
        double success = 0.0;
        for (const auto& [y, p] : table[i]) {
          if (decision[y] == truth[i]) success += p;
        }
        worst = std::min(worst, success);
      }
      result.exact = result.lower = worst;
      result.upper = 1.0;
      return result;
    }
    case Classifier::kBayesOptimal: {
      // Variables psi(l | y) for every output/label pair, then v.
      const std::vector<std::string> ys(outputs.begin(), outputs.end());
      const size_t nl = labels.size();
      const size_t nvars = ys.size() * nl + 1;
      const size_t v = nvars - 1;
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (size_t i = 0; i < hypotheses.size(); ++i) {
        std::vector<double> row(nvars, 0.0);
        row[v] = 1.0;
        for (size_t k = 0; k < ys.size(); ++k) {
          row[k * nl + truth[i]] = -prob(i, ys[k]);
        }
        a.push_back(std::move(row));
        b.push_back(0.0);
      }
      for (size_t k = 0; k < ys.size(); ++k) {
        std::vector<double> row(nvars, 0.0);
        for (size_t l = 0; l < nl; ++l) row[k * nl + l] = 1.0;
        a.push_back(std::move(row));
        b.push_back(1.0);
      }
      std::vector<double> c(nvars, 0.0);
      c[v] = 1.0;
      AHDP_ASSIGN_OR_RETURN(const LpSolution lp, MaximizeFromOrigin(a, b, c));
      const double power = std::clamp(lp.value, 0.0, 1.0);
      result.exact = result.lower = result.upper = power;
      return result;
    }
  }
  return absl::InternalError("unhandled classifier");
}

DiscreteMechanism LeakLengthMechanism() {
  return DiscreteMechanism{
      "leak-length", [](const Dataset& d) -> absl::StatusOr<OutputDistribution> {
        return OutputDistribution{{absl::StrCat("size=", d.size()), 1.0}};
      }};
}

DemoModel ExactSizeSideInformationDemo() {
  const Record private_user = ScalarRecord(1, 0);
  const Record public_user{DataValue::Scalar(2), PrivacyLevel::Infinite()};
  const Dataset observed{{ScalarRecord(1, 0), 1}, {public_user, 1}};
  const Dataset with_private = Add(observed, Dataset{{private_user, 1}}).value();
  const Dataset with_public = Add(observed, Dataset{{public_user, 1}}).value();
  ThreatModel model =
      ThreatModel::Create({with_private, with_public},
                          PowerTarget::kDataProjection, observed,
                          "exact size known: D_o + (x1,0) or D_o + (x2,inf)")
          .value();
  DiscreteMechanism mechanism{
      "count-of-public-tuple",
      [public_user](const Dataset& d) -> absl::StatusOr<OutputDistribution> {
        return OutputDistribution{
            {absl::StrCat("h=", d.count(public_user)), 1.0}};
      }};
  return DemoModel{std::move(model), std::move(mechanism),
                   CorrelationDomain({private_user, public_user})};
}

}  // namespace ahdp
