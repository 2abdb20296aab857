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

// Privacy mappings alpha(x, eps): the privacy a mechanism actually spends on
// one user holding data x with demand eps.
//
// A mechanism is alpha-AHDP when, for every pair of datasets, the log ratio
// of its output probabilities is bounded by the alpha-weighted add-remove
// distance between them. It honours every user's demand on a domain W when
// alpha(x, eps) <= eps on all of W (see Certify).

#ifndef AHDP_PRIVACY_H_
#define AHDP_PRIVACY_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ahdp/dataset.h"

namespace ahdp {

enum class MappingKind {
  kEpsilon,      // eps
  kOneMinusExp,  // 1 - exp(-eps)
  kRatio,        // eps / (1 + eps)
  kCapped,       // min(base, t); CappedEpsilon(t) has base = Epsilon
  kScaled,       // factor * base
  kSum,          // sum of children
  kConstant,     // c
  kPerValueMin,  // table[x], the smallest demand admissible for x
};

// Immutable expression tree; copies share structure.
class PrivacyMapping {
 public:
  static PrivacyMapping Epsilon();
  static PrivacyMapping OneMinusExp();
  static PrivacyMapping Ratio();
  static PrivacyMapping CappedEpsilon(double t);
  static PrivacyMapping Capped(PrivacyMapping base, double t);
  static PrivacyMapping Scaled(PrivacyMapping base, double factor);
  static PrivacyMapping Sum(std::vector<PrivacyMapping> children);
  static PrivacyMapping Constant(double c);
  // Values missing from the table evaluate to +inf.
  static PrivacyMapping PerValueMin(std::map<DataValue, double> table);

  MappingKind kind() const;

  // alpha(x, eps) in [0, +inf]; deterministic.
  double Evaluate(const DataValue& x, PrivacyLevel epsilon) const;
  double Evaluate(const Record& r) const { return Evaluate(r.value, r.epsilon); }

  // Name in the CLI grammar where one exists ("epsilon", "capped:2",
  // "scaled:one-minus-exp:0.5"); composite forms use sum(...) / min(...).
  std::string Describe() const;

 private:
  struct Node;
  static std::shared_ptr<const Node> MakeNode(
      MappingKind kind, double parameter = 0.0,
      std::vector<PrivacyMapping> children = {},
      std::map<DataValue, double> table = {});
  explicit PrivacyMapping(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Parses `epsilon`, `one-minus-exp`, `ratio`, `capped:<t>`,
// `scaled:<name>:<factor>` and `constant:<c>`. Names nest through `scaled`.
absl::StatusOr<PrivacyMapping> ParseMapping(absl::string_view name);

// Sequential composition: the sum of the two mappings.
PrivacyMapping Compose(const PrivacyMapping& a1, const PrivacyMapping& a2);

struct PrivacyCertificate {
  PrivacyMapping mapping;
  CorrelationDomain domain;
  bool is_w_ahdp = false;
  // Domain tuples where alpha(x, eps) > eps, in domain order.
  std::vector<Record> witnesses;
};

// Exhaustive check of alpha(x, eps) <= eps over the domain.
PrivacyCertificate Certify(const PrivacyMapping& mapping,
                           const CorrelationDomain& domain);

// d_alpha(a, b) = sum over tuples of alpha * |h_a - h_b|. Returns +inf when a
// differing tuple carries infinite weight; tuples with equal counts
// contribute nothing regardless of their weight.
double WeightedDistance(const PrivacyMapping& alpha, const Dataset& a,
                        const Dataset& b);

}  // namespace ahdp

#endif  // AHDP_PRIVACY_H_
