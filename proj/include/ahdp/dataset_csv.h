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

// CSV ingestion and export, one user per row.
//
//   scalar:       value,epsilon
//   categorical:  label,epsilon        (labels are positive integers)
//   regression:   x1,...,xd,y,epsilon
//
// `epsilon` accepts decimal literals and the token `inf`. Blank lines and
// lines starting with '#' are skipped.

#ifndef AHDP_DATASET_CSV_H_
#define AHDP_DATASET_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ahdp/dataset.h"

namespace ahdp {

struct CsvOptions {
  // Scalar values are rounded to this many decimals so that equal readings
  // group into one record.
  int scalar_decimals = 2;
};

struct CsvDataset {
  ValueKind kind = ValueKind::kScalar;
  // Covariate dimension for regression files, 0 otherwise.
  size_t dimension = 0;
  Dataset dataset;
};

// Parses a privacy demand literal ("0.5", "3", "inf").
absl::StatusOr<PrivacyLevel> ParsePrivacyLevel(absl::string_view token);

// Rounds to `decimals` places (half away from zero).
double Quantize(double value, int decimals);

// Reads a dataset; the kind is inferred from the header row.
absl::StatusOr<CsvDataset> ReadDatasetCsv(std::istream& in,
                                          const CsvOptions& options = {});
absl::StatusOr<CsvDataset> ReadDatasetCsvFile(const std::string& path,
                                              const CsvOptions& options = {});

// Writes one row per user (records with count c appear c times) in the
// format matching the dataset's kind. All records must share a kind.
absl::Status WriteDatasetCsv(std::ostream& out, const Dataset& dataset);
absl::Status WriteDatasetCsvFile(const std::string& path,
                                 const Dataset& dataset);

}  // namespace ahdp

#endif  // AHDP_DATASET_CSV_H_
