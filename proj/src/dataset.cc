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

#include "ahdp/dataset.h"

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdio>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace ahdp {
namespace {

// Maps the IEEE bit pattern to an unsigned key whose order matches the
// numeric order (negative values have their bits flipped).
uint64_t OrderedBits(double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  return (bits >> 63) ? ~bits : (bits | (uint64_t{1} << 63));
}

}  // namespace

std::strong_ordering CompareBits(double a, double b) {
  return OrderedBits(a) <=> OrderedBits(b);
}

absl::StatusOr<PrivacyLevel> PrivacyLevel::Create(double epsilon) {
  if (std::isnan(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("privacy demand must be in [0, inf], got ", epsilon));
  }
  return PrivacyLevel(epsilon);
}

const char* ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kScalar:
      return "scalar";
    case ValueKind::kCategorical:
      return "categorical";
    case ValueKind::kRegression:
      return "regression";
  }
  return "unknown";
}

std::strong_ordering operator<=>(const DataValue& a, const DataValue& b) {
  if (auto c = a.rep_.index() <=> b.rep_.index(); c != 0) return c;
  switch (a.kind()) {
    case ValueKind::kScalar:
      return CompareBits(a.scalar(), b.scalar());
    case ValueKind::kCategorical:
      return a.label() <=> b.label();
    case ValueKind::kRegression: {
      const RegressionPoint& pa = a.regression();
      const RegressionPoint& pb = b.regression();
      if (auto c = pa.covariates.size() <=> pb.covariates.size(); c != 0) {
        return c;
      }
      for (size_t i = 0; i < pa.covariates.size(); ++i) {
        if (auto c = CompareBits(pa.covariates[i], pb.covariates[i]); c != 0) {
          return c;
        }
      }
      return CompareBits(pa.target, pb.target);
    }
  }
  return std::strong_ordering::equal;
}

Dataset::Dataset(
    std::initializer_list<std::pair<Record, uint64_t>> entries) {
  for (const auto& [record, count] : entries) {
    [[maybe_unused]] absl::Status status = Insert(record, count);
    assert(status.ok());
  }
}

absl::Status Dataset::Insert(const Record& record, uint64_t count) {
  if (count == 0) return absl::OkStatus();
  if (count > kMaxRecordCount) {
    return absl::OutOfRangeError("record multiplicity exceeds 2^32 - 1");
  }
  auto [it, inserted] = counts_.try_emplace(record, 0);
  if (it->second > kMaxRecordCount - count) {
    if (inserted) counts_.erase(it);
    return absl::OutOfRangeError("record multiplicity exceeds 2^32 - 1");
  }
  it->second += count;
  size_ += count;
  return absl::OkStatus();
}

uint64_t Dataset::count(const Record& record) const {
  auto it = counts_.find(record);
  return it == counts_.end() ? 0 : it->second;
}

absl::StatusOr<Dataset> Add(const Dataset& a, const Dataset& b) {
  Dataset result = a;
  for (const auto& [record, count] : b) {
    if (absl::Status s = result.Insert(record, count); !s.ok()) return s;
  }
  return result;
}

Dataset Subtract(const Dataset& a, const Dataset& b) {
  Dataset result;
  for (const auto& [record, count] : a) {
    const uint64_t removed = b.count(record);
    if (count > removed) {
      [[maybe_unused]] absl::Status s = result.Insert(record, count - removed);
    }
  }
  return result;
}

DataMultiset ProjectData(const Dataset& dataset) {
  DataMultiset projection;
  for (const auto& [record, count] : dataset) {
    projection[record.value] += count;
  }
  return projection;
}

CorrelationDomain::CorrelationDomain(std::vector<Record> pairs)
    : pairs_(std::make_move_iterator(pairs.begin()),
             std::make_move_iterator(pairs.end())) {}

bool CorrelationDomain::Admits(const Dataset& dataset) const {
  for (const auto& [record, count] : dataset) {
    if (!Contains(record)) return false;
  }
  return true;
}

std::string FormatReal(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string EncodeValue(const DataValue& value) {
  switch (value.kind()) {
    case ValueKind::kScalar:
      return FormatReal(value.scalar());
    case ValueKind::kCategorical:
      return absl::StrCat("#", value.label());
    case ValueKind::kRegression: {
      const RegressionPoint& p = value.regression();
      std::vector<std::string> parts;
      for (double x : p.covariates) parts.push_back(FormatReal(x));
      return absl::StrCat("[", absl::StrJoin(parts, " "), "|",
                          FormatReal(p.target), "]");
    }
  }
  return "";
}

std::string EncodeRecord(const Record& record) {
  return absl::StrCat("(", EncodeValue(record.value), ",",
                      FormatReal(record.epsilon.value()), ")");
}

std::string EncodeDataset(const Dataset& dataset) {
  std::vector<std::string> parts;
  for (const auto& [record, count] : dataset) {
    parts.push_back(absl::StrCat(EncodeRecord(record), "x", count));
  }
  return absl::StrCat("{", absl::StrJoin(parts, ";"), "}");
}

std::string EncodeMultiset(const DataMultiset& multiset) {
  std::vector<std::string> parts;
  for (const auto& [value, count] : multiset) {
    parts.push_back(absl::StrCat(EncodeValue(value), "x", count));
  }
  return absl::StrCat("{", absl::StrJoin(parts, ";"), "}");
}

}  // namespace ahdp
