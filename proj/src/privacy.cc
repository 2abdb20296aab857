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

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "ahdp/status_macros.h"

namespace ahdp {

struct PrivacyMapping::Node {
  MappingKind kind;
  double parameter = 0.0;  // t for kCapped, factor for kScaled, c for kConstant
  std::vector<PrivacyMapping> children;
  std::map<DataValue, double> table;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::shared_ptr<const PrivacyMapping::Node> PrivacyMapping::MakeNode(
    MappingKind kind, double parameter, std::vector<PrivacyMapping> children,
    std::map<DataValue, double> table) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->parameter = parameter;
  node->children = std::move(children);
  node->table = std::move(table);
  return node;
}

PrivacyMapping PrivacyMapping::Epsilon() {
  return PrivacyMapping(MakeNode(MappingKind::kEpsilon));
}

PrivacyMapping PrivacyMapping::OneMinusExp() {
  return PrivacyMapping(
      MakeNode(MappingKind::kOneMinusExp));
}

PrivacyMapping PrivacyMapping::Ratio() {
  return PrivacyMapping(MakeNode(MappingKind::kRatio));
}

PrivacyMapping PrivacyMapping::CappedEpsilon(double t) {
  return Capped(Epsilon(), t);
}

PrivacyMapping PrivacyMapping::Capped(PrivacyMapping base, double t) {
  return PrivacyMapping(
      MakeNode(MappingKind::kCapped, t, {std::move(base)}));
}

PrivacyMapping PrivacyMapping::Scaled(PrivacyMapping base, double factor) {
  return PrivacyMapping(MakeNode(MappingKind::kScaled, factor, {std::move(base)}));
}

PrivacyMapping PrivacyMapping::Sum(std::vector<PrivacyMapping> children) {
  return PrivacyMapping(MakeNode(MappingKind::kSum, 0.0, std::move(children)));
}

PrivacyMapping PrivacyMapping::Constant(double c) {
  return PrivacyMapping(
      MakeNode(MappingKind::kConstant, c));
}

PrivacyMapping PrivacyMapping::PerValueMin(std::map<DataValue, double> table) {
  return PrivacyMapping(MakeNode(MappingKind::kPerValueMin, 0.0, {}, std::move(table)));
}

MappingKind PrivacyMapping::kind() const { return node_->kind; }

double PrivacyMapping::Evaluate(const DataValue& x,
                                PrivacyLevel epsilon) const {
  const double eps = epsilon.value();
  switch (node_->kind) {
    case MappingKind::kEpsilon:
      return eps;
    case MappingKind::kOneMinusExp:
      return -std::expm1(-eps);
    case MappingKind::kRatio:
      return std::isinf(eps) ? 1.0 : eps / (1.0 + eps);
    case MappingKind::kCapped:
      return std::min(node_->children[0].Evaluate(x, epsilon),
                      node_->parameter);
    case MappingKind::kScaled: {
      if (node_->parameter == 0.0) return 0.0;
      return node_->parameter * node_->children[0].Evaluate(x, epsilon);
    }
    case MappingKind::kSum: {
      double total = 0.0;
      for (const PrivacyMapping& child : node_->children) {
        total += child.Evaluate(x, epsilon);
      }
      return total;
    }
    case MappingKind::kConstant:
      return node_->parameter;
    case MappingKind::kPerValueMin: {
      auto it = node_->table.find(x);
      return it == node_->table.end() ? kInf : it->second;
    }
  }
  return kInf;
}

std::string PrivacyMapping::Describe() const {
  switch (node_->kind) {
    case MappingKind::kEpsilon:
      return "epsilon";
    case MappingKind::kOneMinusExp:
      return "one-minus-exp";
    case MappingKind::kRatio:
      return "ratio";
    case MappingKind::kCapped:
      if (node_->children[0].kind() == MappingKind::kEpsilon) {
        return absl::StrCat("capped:", FormatReal(node_->parameter));
      }
      return absl::StrCat("min(", node_->children[0].Describe(), ",",
                          FormatReal(node_->parameter), ")");
    case MappingKind::kScaled:
      return absl::StrCat("scaled:", node_->children[0].Describe(), ":",
                          FormatReal(node_->parameter));
    case MappingKind::kSum: {
      std::vector<std::string> parts;
      for (const PrivacyMapping& child : node_->children) {
        parts.push_back(child.Describe());
      }
      return absl::StrCat("sum(", absl::StrJoin(parts, ","), ")");
    }
    case MappingKind::kConstant:
      return absl::StrCat("constant:", FormatReal(node_->parameter));
    case MappingKind::kPerValueMin: {
      std::vector<std::string> parts;
      for (const auto& [value, eps] : node_->table) {
        parts.push_back(absl::StrCat(EncodeValue(value), "=", FormatReal(eps)));
      }
      return absl::StrCat("per-value-min{", absl::StrJoin(parts, ";"), "}");
    }
  }
  return "unknown";
}

absl::StatusOr<PrivacyMapping> ParseMapping(absl::string_view name) {
  auto parse_non_negative = [&](absl::string_view token) -> absl::StatusOr<double> {
    double v;
    if (!absl::SimpleAtod(token, &v) || !std::isfinite(v) || v < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "bad numeric parameter '", token, "' in mapping '", name, "'"));
    }
    return v;
  };
  if (name == "epsilon") return PrivacyMapping::Epsilon();
  if (name == "one-minus-exp") return PrivacyMapping::OneMinusExp();
  if (name == "ratio") return PrivacyMapping::Ratio();
  if (absl::StartsWith(name, "capped:")) {
    AHDP_ASSIGN_OR_RETURN(double t, parse_non_negative(name.substr(7)));
    return PrivacyMapping::CappedEpsilon(t);
  }
  if (absl::StartsWith(name, "constant:")) {
    AHDP_ASSIGN_OR_RETURN(double c, parse_non_negative(name.substr(9)));
    return PrivacyMapping::Constant(c);
  }
  if (absl::StartsWith(name, "scaled:")) {
    const absl::string_view rest = name.substr(7);
    const size_t colon = rest.rfind(':');
    if (colon == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected scaled:<name>:<factor>, got '", name, "'"));
    }
    AHDP_ASSIGN_OR_RETURN(PrivacyMapping base,
                          ParseMapping(rest.substr(0, colon)));
    AHDP_ASSIGN_OR_RETURN(double factor,
                          parse_non_negative(rest.substr(colon + 1)));
    return PrivacyMapping::Scaled(std::move(base), factor);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown privacy mapping '", name, "'"));
}

PrivacyMapping Compose(const PrivacyMapping& a1, const PrivacyMapping& a2) {
  return PrivacyMapping::Sum({a1, a2});
}

PrivacyCertificate Certify(const PrivacyMapping& mapping,
                           const CorrelationDomain& domain) {
  PrivacyCertificate certificate{mapping, domain, true, {}};
  for (const Record& pair : domain.pairs()) {
    if (!(mapping.Evaluate(pair) <= pair.epsilon.value())) {
      certificate.witnesses.push_back(pair);
    }
  }
  certificate.is_w_ahdp = certificate.witnesses.empty();
  return certificate;
}

double WeightedDistance(const PrivacyMapping& alpha, const Dataset& a,
                        const Dataset& b) {
  double distance = 0.0;
  auto accumulate = [&](const Record& record, uint64_t ca, uint64_t cb) {
    if (ca == cb) return;
    const double weight = alpha.Evaluate(record);
    if (weight == 0.0) return;
    const uint64_t diff = ca > cb ? ca - cb : cb - ca;
    distance += weight * static_cast<double>(diff);
  };
  // Merge walk over the union of supports in canonical order, so the sum is
  // accumulated identically for (a, b) and (b, a).
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      accumulate(ia->first, ia->second, 0);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      accumulate(ib->first, 0, ib->second);
      ++ib;
    } else {
      accumulate(ia->first, ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return distance;
}

}  // namespace ahdp
