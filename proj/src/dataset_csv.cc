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

#include "ahdp/dataset_csv.h"

#include <cmath>
#include <fstream>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "ahdp/status_macros.h"

namespace ahdp {
namespace {

std::vector<std::string> SplitRow(absl::string_view line) {
  std::vector<std::string> fields;
  for (absl::string_view field : absl::StrSplit(line, ',')) {
    fields.emplace_back(absl::StripAsciiWhitespace(field));
  }
  return fields;
}

absl::StatusOr<double> ParseFiniteReal(absl::string_view token, int line_no) {
  double value;
  if (!absl::SimpleAtod(token, &value) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("line ", line_no, ": not a finite number: '", token, "'"));
  }
  return value;
}

absl::StatusOr<ValueKind> KindFromHeader(const std::vector<std::string>& h,
                                         size_t* dimension) {
  *dimension = 0;
  if (h.size() == 2 && h[0] == "value" && h[1] == "epsilon") {
    return ValueKind::kScalar;
  }
  if (h.size() == 2 && h[0] == "label" && h[1] == "epsilon") {
    return ValueKind::kCategorical;
  }
  if (h.size() >= 3 && h.back() == "epsilon" && h[h.size() - 2] == "y") {
    for (size_t i = 0; i + 2 < h.size(); ++i) {
      if (h[i] != absl::StrCat("x", i + 1)) {
        return absl::InvalidArgumentError(
            absl::StrCat("unexpected regression header column '", h[i], "'"));
      }
    }
    *dimension = h.size() - 2;
    return ValueKind::kRegression;
  }
  return absl::InvalidArgumentError(
      "unrecognized header; expected 'value,epsilon', 'label,epsilon' or "
      "'x1,...,xd,y,epsilon'");
}

}  // namespace

absl::StatusOr<PrivacyLevel> ParsePrivacyLevel(absl::string_view token) {
  std::string lowered = absl::AsciiStrToLower(absl::StripAsciiWhitespace(token));
  if (lowered == "inf" || lowered == "+inf" || lowered == "infinity") {
    return PrivacyLevel::Infinite();
  }
  double value;
  if (!absl::SimpleAtod(lowered, &value) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse privacy demand '", token, "'"));
  }
  return PrivacyLevel::Create(value);
}

double Quantize(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

absl::StatusOr<CsvDataset> ReadDatasetCsv(std::istream& in,
                                          const CsvOptions& options) {
  CsvDataset result;
  bool have_header = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> fields = SplitRow(view);
    if (!have_header) {
      AHDP_ASSIGN_OR_RETURN(result.kind,
                            KindFromHeader(fields, &result.dimension));
      have_header = true;
      continue;
    }
    const size_t expected =
        result.kind == ValueKind::kRegression ? result.dimension + 2 : 2;
    if (fields.size() != expected) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected ", expected,
                       " fields, got ", fields.size()));
    }
    auto epsilon = ParsePrivacyLevel(fields.back());
    if (!epsilon.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", epsilon.status().message()));
    }
    Record record{DataValue::Scalar(0), *epsilon};
    switch (result.kind) {
      case ValueKind::kScalar: {
        AHDP_ASSIGN_OR_RETURN(double v, ParseFiniteReal(fields[0], line_no));
        record.value = DataValue::Scalar(Quantize(v, options.scalar_decimals));
        break;
      }
      case ValueKind::kCategorical: {
        int64_t label;
        if (!absl::SimpleAtoi(fields[0], &label) || label < 1) {
          return absl::InvalidArgumentError(absl::StrCat(
              "line ", line_no, ": label must be a positive integer"));
        }
        record.value = DataValue::Category(label);
        break;
      }
      case ValueKind::kRegression: {
        std::vector<double> x(result.dimension);
        for (size_t i = 0; i < result.dimension; ++i) {
          AHDP_ASSIGN_OR_RETURN(x[i], ParseFiniteReal(fields[i], line_no));
        }
        AHDP_ASSIGN_OR_RETURN(
            double y, ParseFiniteReal(fields[result.dimension], line_no));
        record.value = DataValue::Regression(std::move(x), y);
        break;
      }
    }
    AHDP_RETURN_IF_ERROR(result.dataset.Insert(record));
  }
  if (!have_header) return absl::InvalidArgumentError("missing CSV header");
  return result;
}

absl::StatusOr<CsvDataset> ReadDatasetCsvFile(const std::string& path,
                                              const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadDatasetCsv(in, options);
}

absl::Status WriteDatasetCsv(std::ostream& out, const Dataset& dataset) {
  if (dataset.empty()) {
    out << "value,epsilon\n";
    return absl::OkStatus();
  }
  const DataValue& first = dataset.begin()->first.value;
  const ValueKind kind = first.kind();
  const size_t dim =
      kind == ValueKind::kRegression ? first.regression().covariates.size() : 0;
  switch (kind) {
    case ValueKind::kScalar:
      out << "value,epsilon\n";
      break;
    case ValueKind::kCategorical:
      out << "label,epsilon\n";
      break;
    case ValueKind::kRegression:
      for (size_t i = 0; i < dim; ++i) out << "x" << i + 1 << ",";
      out << "y,epsilon\n";
      break;
  }
  for (const auto& [record, count] : dataset) {
    if (record.value.kind() != kind ||
        (kind == ValueKind::kRegression &&
         record.value.regression().covariates.size() != dim)) {
      return absl::InvalidArgumentError("dataset mixes value kinds");
    }
    std::string row;
    switch (kind) {
      case ValueKind::kScalar:
        row = FormatReal(record.value.scalar());
        break;
      case ValueKind::kCategorical:
        row = absl::StrCat(record.value.label());
        break;
      case ValueKind::kRegression:
        for (double x : record.value.regression().covariates) {
          absl::StrAppend(&row, FormatReal(x), ",");
        }
        absl::StrAppend(&row, FormatReal(record.value.regression().target));
        break;
    }
    absl::StrAppend(&row, ",", FormatReal(record.epsilon.value()), "\n");
    for (uint64_t i = 0; i < count; ++i) out << row;
  }
  return absl::OkStatus();
}

absl::Status WriteDatasetCsvFile(const std::string& path,
                                 const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  AHDP_RETURN_IF_ERROR(WriteDatasetCsv(out, dataset));
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace ahdp
