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

// Multiset datasets over (data value, privacy demand) tuples.
//
// A Dataset is the pair (W, h) where h counts how many users submitted each
// tuple. Equality is order-free and zero counts are never stored, so two
// datasets compare equal exactly when their count functions agree.

#ifndef AHDP_DATASET_H_
#define AHDP_DATASET_H_

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace ahdp {

// Largest multiplicity a single record may carry.
inline constexpr uint64_t kMaxRecordCount =
    std::numeric_limits<uint32_t>::max();

// Total order on doubles that agrees with numeric order and separates values
// by their bit pattern (so -0.0 and 0.0 are distinct keys). NaN is never
// admitted by the constructors below.
std::strong_ordering CompareBits(double a, double b);

// Privacy demand epsilon in [0, +inf]. Infinity is a first-class state
// meaning "no privacy requested".
class PrivacyLevel {
 public:
  // Rejects negative and NaN demands.
  static absl::StatusOr<PrivacyLevel> Create(double epsilon);
  static PrivacyLevel Infinite() {
    return PrivacyLevel(std::numeric_limits<double>::infinity());
  }

  // Precondition: epsilon >= 0 (may be +inf).
  constexpr explicit PrivacyLevel(double epsilon) : epsilon_(epsilon) {}

  constexpr double value() const { return epsilon_; }
  bool is_infinite() const {
    return epsilon_ == std::numeric_limits<double>::infinity();
  }

  friend std::strong_ordering operator<=>(const PrivacyLevel& a,
                                          const PrivacyLevel& b) {
    return CompareBits(a.epsilon_, b.epsilon_);
  }
  friend bool operator==(const PrivacyLevel& a, const PrivacyLevel& b) {
    return (a <=> b) == 0;
  }

 private:
  double epsilon_;
};

struct RegressionPoint {
  std::vector<double> covariates;
  double target = 0.0;
};

enum class ValueKind { kScalar = 0, kCategorical = 1, kRegression = 2 };

const char* ValueKindName(ValueKind kind);

// One user's data: a bounded scalar, a label in {1..k}, or a
// covariate/target pair. Kinds never compare equal to each other.
class DataValue {
 public:
  static DataValue Scalar(double value) { return DataValue(Rep(value)); }
  static DataValue Category(int64_t label) { return DataValue(Rep(label)); }
  static DataValue Regression(std::vector<double> covariates, double target) {
    return DataValue(Rep(RegressionPoint{std::move(covariates), target}));
  }

  ValueKind kind() const { return static_cast<ValueKind>(rep_.index()); }

  // Accessors; calling the wrong one for kind() is a programming error.
  double scalar() const { return std::get<double>(rep_); }
  int64_t label() const { return std::get<int64_t>(rep_); }
  const RegressionPoint& regression() const {
    return std::get<RegressionPoint>(rep_);
  }

  friend std::strong_ordering operator<=>(const DataValue& a,
                                          const DataValue& b);
  friend bool operator==(const DataValue& a, const DataValue& b) {
    return (a <=> b) == 0;
  }

 private:
  using Rep = std::variant<double, int64_t, RegressionPoint>;
  explicit DataValue(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

struct Record {
  DataValue value;
  PrivacyLevel epsilon;

  friend std::strong_ordering operator<=>(const Record& a, const Record& b) {
    if (auto c = a.value <=> b.value; c != 0) return c;
    return a.epsilon <=> b.epsilon;
  }
  friend bool operator==(const Record& a, const Record& b) {
    return (a <=> b) == 0;
  }
};

inline Record ScalarRecord(double value, double epsilon) {
  return Record{DataValue::Scalar(value), PrivacyLevel(epsilon)};
}
inline Record CategoryRecord(int64_t label, double epsilon) {
  return Record{DataValue::Category(label), PrivacyLevel(epsilon)};
}

// Multiset of data values (the projection of a Dataset onto data space).
using DataMultiset = std::map<DataValue, uint64_t>;

class Dataset {
 public:
  using Counts = std::map<Record, uint64_t>;
  using const_iterator = Counts::const_iterator;

  Dataset() = default;

  // Convenience constructor for literals; counts of zero are dropped.
  // Precondition: no count (or merged count) exceeds kMaxRecordCount.
  Dataset(std::initializer_list<std::pair<Record, uint64_t>> entries);

  // Adds `count` copies of `record`. Fails if the multiplicity would exceed
  // kMaxRecordCount.
  absl::Status Insert(const Record& record, uint64_t count = 1);

  uint64_t count(const Record& record) const;
  // Total number of users, sum of counts.
  uint64_t size() const { return size_; }
  // Number of distinct tuples with positive count, |T(D)|.
  size_t support_size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  const_iterator begin() const { return counts_.begin(); }
  const_iterator end() const { return counts_.end(); }
  const Counts& counts() const { return counts_; }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.counts_ == b.counts_;
  }

 private:
  Counts counts_;
  uint64_t size_ = 0;
};

// Pointwise sum of count functions. Fails on multiplicity overflow.
absl::StatusOr<Dataset> Add(const Dataset& a, const Dataset& b);

// Pointwise truncated difference max(0, h_a - h_b).
Dataset Subtract(const Dataset& a, const Dataset& b);

// Marginal on data space: sums counts across privacy demands.
DataMultiset ProjectData(const Dataset& dataset);

// The finite set W of admissible (data, privacy) tuples.
class CorrelationDomain {
 public:
  CorrelationDomain() = default;
  explicit CorrelationDomain(std::vector<Record> pairs);

  bool Contains(const Record& record) const {
    return pairs_.count(record) > 0;
  }
  // Whether every supported record of `dataset` lies in the domain.
  bool Admits(const Dataset& dataset) const;

  const std::set<Record>& pairs() const { return pairs_; }
  size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

 private:
  std::set<Record> pairs_;
};

// Canonical text encodings. They are injective on values the CSV layer can
// produce and are used for deterministic tie-breaking and reporting.
std::string FormatReal(double value);
std::string EncodeValue(const DataValue& value);
std::string EncodeRecord(const Record& record);
std::string EncodeDataset(const Dataset& dataset);
std::string EncodeMultiset(const DataMultiset& multiset);

}  // namespace ahdp

#endif  // AHDP_DATASET_H_
