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

#include "ahdp/experiments.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "ahdp/dataset_csv.h"
#include "ahdp/mechanisms.h"
#include "ahdp/rng.h"
#include "ahdp/status_macros.h"
#include "boost/math/special_functions/gamma.hpp"
#include "json.hpp"

namespace ahdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kCalibrationSteps = 20;
constexpr int64_t kCalibrationSize = 2000;
constexpr double kCorrelationTolerance = 0.05;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double WeightDraw(Rng& rng) {
  return std::clamp(75.0 + 15.0 * rng.StandardNormal(), 30.0, 150.0);
}

struct WeightDraws {
  std::vector<double> weights;
  std::vector<double> links;
  std::vector<double> noise;
};

WeightDraws DrawWeights(int64_t n, bool independent, Rng& rng) {
  WeightDraws d;
  for (int64_t i = 0; i < n; ++i) {
    d.weights.push_back(Quantize(WeightDraw(rng), 2));
    d.links.push_back(independent ? WeightDraw(rng) : d.weights.back());
    d.noise.push_back(rng.StandardNormal());
  }
  return d;
}

std::vector<double> EpsilonsFor(const WeightDraws& d, double tau,
                                double scale) {
  std::vector<double> eps;
  for (size_t i = 0; i < d.weights.size(); ++i) {
    const double raw = kWeightMaxEpsilon * Sigmoid(-(d.links[i] - 75.0) / scale) +
                       tau * d.noise[i];
    eps.push_back(Quantize(std::clamp(raw, 0.0, kWeightMaxEpsilon), 2));
  }
  return eps;
}

absl::StatusOr<double> CalibrateTau(const WeightDraws& d, double target,
                                    double scale) {
  auto corr = [&](double tau) {
    return PearsonCorrelation(d.weights, EpsilonsFor(d, tau, scale));
  };
  double lo = 0.0;
  double hi = 3.0;
  if (!(corr(lo) <= target) || !(corr(hi) >= target)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "correlation ", FormatReal(target), " is outside the reachable range [",
        FormatReal(corr(lo)), ", ", FormatReal(corr(hi)), "]"));
  }
  for (int i = 0; i < kCalibrationSteps; ++i) {
    const double mid = (lo + hi) / 2;
    if (corr(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double tau = (lo + hi) / 2;
  if (std::fabs(corr(tau) - target) > kCorrelationTolerance) {
    return absl::FailedPreconditionError(absl::StrCat(
        "could not reach correlation ", FormatReal(target), " (got ",
        FormatReal(corr(tau)), ")"));
  }
  return tau;
}

absl::Status CheckContingency(const Contingency& table) {
  if (table.size() != static_cast<size_t>(kEducationLevels)) {
    return absl::InvalidArgumentError(
        absl::StrCat("contingency needs ", kEducationLevels, " rows"));
  }
  double total = 0.0;
  for (const auto& row : table) {
    if (row.size() != kEducationEpsilons.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "contingency rows need ", kEducationEpsilons.size(), " entries"));
    }
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        return absl::InvalidArgumentError("contingency entries must be >= 0");
      }
      total += p;
    }
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat(
        "contingency entries sum to ", FormatReal(total), ", not 1"));
  }
  return absl::OkStatus();
}

std::vector<Record> Users(const Dataset& dataset) {
  std::vector<Record> users;
  users.reserve(dataset.size());
  for (const auto& [record, count] : dataset) {
    for (uint64_t c = 0; c < count; ++c) users.push_back(record);
  }
  return users;
}

// n users without replacement (partial Fisher-Yates).
Dataset Subsample(const std::vector<Record>& users, int64_t n, Rng& rng) {
  std::vector<size_t> index(users.size());
  for (size_t i = 0; i < index.size(); ++i) index[i] = i;
  Dataset out;
  for (int64_t i = 0; i < n; ++i) {
    const size_t j = i + rng.UniformInt(index.size() - i);
    std::swap(index[i], index[j]);
    (void)out.Insert(users[index[i]]);
  }
  return out;
}

uint64_t TrialKey(size_t size_index, int trial, size_t slot) {
  return (static_cast<uint64_t>(size_index) << 48) ^
         (static_cast<uint64_t>(trial) << 16) ^ slot;
}

// Runs body(trial) for every trial on `threads` workers. Results are written
// by trial index, so the outcome does not depend on scheduling. Returns the
// error of the lowest failing trial.
absl::Status RunTrials(int trials, int threads,
                       const std::function<absl::Status(int)>& body) {
  std::vector<absl::Status> status(trials);
  const int workers = std::max(1, std::min(threads, trials));
  auto work = [&](int w) {
    for (int i = w; i < trials; i += workers) status[i] = body(i);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& s : status) AHDP_RETURN_IF_ERROR(s);
  return absl::OkStatus();
}

absl::StatusOr<std::vector<SweepMethod>> ParseMethods(
    const std::vector<std::string>& names, bool allow_non_private) {
  if (names.empty()) return absl::InvalidArgumentError("no methods given");
  std::vector<SweepMethod> out;
  for (const std::string& name : names) {
    AHDP_ASSIGN_OR_RETURN(SweepMethod m, ParseSweepMethod(name));
    if (m.kind == SweepMethod::Kind::kNonPrivate && !allow_non_private) {
      return absl::InvalidArgumentError(
          "non-private is only available for regression sweeps");
    }
    out.push_back(std::move(m));
  }
  return out;
}

absl::Status CheckSweep(const SweepConfig& config, uint64_t available) {
  if (config.sizes.empty()) return absl::InvalidArgumentError("no sizes given");
  if (config.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  for (int64_t n : config.sizes) {
    if (n < 1 || static_cast<uint64_t>(n) > available) {
      return absl::InvalidArgumentError(absl::StrCat(
          "size ", n, " is outside [1, ", available, "] (dataset size)"));
    }
  }
  return absl::OkStatus();
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

// Shared driver: `run(subsample, method, rng)` returns the trial error.
using TrialError = std::function<absl::StatusOr<double>(
    const Dataset&, const SweepMethod&, Rng&)>;

absl::StatusOr<SweepResult> Sweep(const std::string& experiment,
                                  const std::string& metric,
                                  const Dataset& data,
                                  const SweepConfig& config,
                                  const std::vector<SweepMethod>& methods,
                                  const TrialError& run, bool median) {
  AHDP_RETURN_IF_ERROR(CheckSweep(config, data.size()));
  const std::vector<Record> users = Users(data);
  const Rng root(config.seed);
  SweepResult result{experiment, config, {}};
  for (size_t s = 0; s < config.sizes.size(); ++s) {
    const int64_t n = config.sizes[s];
    std::vector<std::vector<double>> errors(
        methods.size(), std::vector<double>(config.trials));
    AHDP_RETURN_IF_ERROR(RunTrials(
        config.trials, config.threads, [&](int trial) -> absl::Status {
          Rng sub_rng = root.Derive(TrialKey(s, trial, 0));
          const Dataset sample = Subsample(users, n, sub_rng);
          for (size_t m = 0; m < methods.size(); ++m) {
            Rng rng = root.Derive(TrialKey(s, trial, m + 1));
            AHDP_ASSIGN_OR_RETURN(errors[m][trial],
                                  run(sample, methods[m], rng));
          }
          return absl::OkStatus();
        }));
    for (size_t m = 0; m < methods.size(); ++m) {
      result.rows.push_back(SweepRow{
          methods[m].name, n, metric,
          median ? Median(errors[m]) : Mean(errors[m]), config.trials,
          config.seed});
    }
  }
  return result;
}

nlohmann::ordered_json JsonNumber(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

// ---- Generators -----------------------------------------------------------

double PearsonCorrelation(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return kNaN;
  const double ma = Mean(a);
  const double mb = Mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

void ScalarColumns(const Dataset& dataset, std::vector<double>& values,
                   std::vector<double>& epsilons) {
  values.clear();
  epsilons.clear();
  for (const auto& [record, count] : dataset) {
    for (uint64_t c = 0; c < count; ++c) {
      values.push_back(record.value.scalar());
      epsilons.push_back(record.epsilon.value());
    }
  }
}

absl::StatusOr<Dataset> GenWeightEps(int64_t n, uint64_t seed,
                                     const WeightOptions& options) {
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (!(options.link_scale > 0.0)) {
    return absl::InvalidArgumentError("link_scale must be > 0");
  }
  if (!options.independent &&
      !(options.target_corr > -1.0 && options.target_corr < 0.0)) {
    return absl::InvalidArgumentError("target correlation must be in (-1, 0)");
  }
  Rng rng(seed);
  const WeightDraws draws = DrawWeights(n, options.independent, rng);
  double tau = 0.0;
  if (!options.independent) {
    // Small samples calibrate on an auxiliary draw from a child stream.
    if (n >= kCalibrationSize) {
      AHDP_ASSIGN_OR_RETURN(
          tau, CalibrateTau(draws, options.target_corr, options.link_scale));
    } else {
      Rng aux = Rng(seed).Derive(1);
      const WeightDraws calib = DrawWeights(kCalibrationSize, false, aux);
      AHDP_ASSIGN_OR_RETURN(
          tau, CalibrateTau(calib, options.target_corr, options.link_scale));
    }
  }
  const std::vector<double> eps = EpsilonsFor(draws, tau, options.link_scale);
  Dataset out;
  for (int64_t i = 0; i < n; ++i) {
    AHDP_RETURN_IF_ERROR(out.Insert(ScalarRecord(draws.weights[i], eps[i])));
  }
  return out;
}

Contingency DefaultEducationContingency() {
  constexpr double kMarginal[kEducationLevels] = {0.06, 0.17, 0.33,
                                                  0.24, 0.14, 0.06};
  Contingency table;
  for (int i = 0; i < kEducationLevels; ++i) {
    const double preferred = 4.0 - 0.8 * i;
    std::vector<double> row;
    double z = 0.0;
    for (size_t j = 0; j < kEducationEpsilons.size(); ++j) {
      row.push_back(std::exp(-std::fabs(static_cast<double>(j) - preferred)));
      z += row.back();
    }
    for (double& p : row) p *= kMarginal[i] / z;
    table.push_back(std::move(row));
  }
  return table;
}

Contingency UniformContingency() {
  const double p = 1.0 / (kEducationLevels * kEducationEpsilons.size());
  return Contingency(kEducationLevels,
                     std::vector<double>(kEducationEpsilons.size(), p));
}

absl::StatusOr<Dataset> GenEducationEps(int64_t n, uint64_t seed,
                                        const Contingency& table) {
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  AHDP_RETURN_IF_ERROR(CheckContingency(table));
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& row : table) {
    for (double p : row) cumulative.push_back(total += p);
  }
  Rng rng(seed);
  Dataset out;
  const size_t cols = kEducationEpsilons.size();
  for (int64_t i = 0; i < n; ++i) {
    const double u = rng.Uniform() * total;
    size_t cell = std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                  cumulative.begin();
    cell = std::min(cell, cumulative.size() - 1);
    AHDP_RETURN_IF_ERROR(out.Insert(CategoryRecord(
        static_cast<int64_t>(cell / cols) + 1, kEducationEpsilons[cell % cols])));
  }
  return out;
}

absl::StatusOr<std::vector<std::vector<double>>> EducationCounts(
    const Dataset& dataset) {
  std::vector<std::vector<double>> counts(
      kEducationLevels, std::vector<double>(kEducationEpsilons.size(), 0.0));
  for (const auto& [record, count] : dataset) {
    if (record.value.kind() != ValueKind::kCategorical ||
        record.value.label() < 1 || record.value.label() > kEducationLevels) {
      return absl::InvalidArgumentError(
          absl::StrCat("not an education record: ", EncodeRecord(record)));
    }
    auto it = std::find(kEducationEpsilons.begin(), kEducationEpsilons.end(),
                        record.epsilon.value());
    if (it == kEducationEpsilons.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("not an education privacy level: ",
                       EncodeRecord(record)));
    }
    counts[record.value.label() - 1][it - kEducationEpsilons.begin()] +=
        static_cast<double>(count);
  }
  return counts;
}

absl::StatusOr<ChiSquared> ChiSquaredIndependence(
    const std::vector<std::vector<double>>& counts) {
  if (counts.empty() || counts[0].empty()) {
    return absl::InvalidArgumentError("empty table");
  }
  const size_t cols = counts[0].size();
  std::vector<double> row_sum(counts.size(), 0.0);
  std::vector<double> col_sum(cols, 0.0);
  double total = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != cols) return absl::InvalidArgumentError("ragged table");
    for (size_t j = 0; j < cols; ++j) {
      if (!(counts[i][j] >= 0.0)) {
        return absl::InvalidArgumentError("negative count");
      }
      row_sum[i] += counts[i][j];
      col_sum[j] += counts[i][j];
      total += counts[i][j];
    }
  }
  ChiSquared out;
  int rows_used = 0;
  int cols_used = 0;
  for (double r : row_sum) rows_used += r > 0;
  for (double c : col_sum) cols_used += c > 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    for (size_t j = 0; j < cols; ++j) {
      if (row_sum[i] == 0 || col_sum[j] == 0) continue;
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = counts[i][j] - expected;
      out.statistic += diff * diff / expected;
    }
  }
  out.dof = std::max(0, (rows_used - 1) * (cols_used - 1));
  out.p_value = out.dof == 0 ? 1.0
                             : boost::math::gamma_q(out.dof / 2.0,
                                                    out.statistic / 2.0);
  return out;
}

absl::StatusOr<Dataset> GenRegressionEps(
    const std::vector<RegressionPoint>& base, uint64_t seed) {
  auto in_range = [](double v) { return v >= -1.0 && v <= 1.0; };
  Rng rng(seed);
  Dataset out;
  for (const RegressionPoint& p : base) {
    bool ok = in_range(p.target);
    for (double x : p.covariates) ok = ok && in_range(x);
    if (!ok) {
      return absl::InvalidArgumentError(
          "regression base must be normalized to [-1, 1]");
    }
    const double eps = std::exp(-5.0 + 7.0 * rng.Uniform());
    AHDP_RETURN_IF_ERROR(out.Insert(Record{
        DataValue::Regression(p.covariates, p.target), PrivacyLevel(eps)}));
  }
  return out;
}

std::vector<RegressionPoint> SyntheticRegressionBase(int64_t n,
                                                     size_t dimension,
                                                     uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  for (int64_t i = 0; i < n; ++i) {
    std::vector<double> row;
    double y = 0.0;
    for (size_t j = 0; j < dimension; ++j) {
      const double x = 2 * rng.Uniform() - 1;
      const double theta = 0.8 * (j % 2 ? -1.0 : 1.0) * (j + 1.0) / dimension;
      y += theta * x;
      row.push_back(x);
    }
    row.push_back(y + 0.1 * rng.StandardNormal());
    rows.push_back(std::move(row));
  }
  return NormalizeRegressionRows(rows).value();
}

absl::StatusOr<std::vector<std::vector<double>>> ReadNumericCsv(
    std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || absl::StartsWith(view, "#")) continue;
    std::vector<double> row;
    bool numeric = true;
    for (absl::string_view cell : absl::StrSplit(view, ',')) {
      double v;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(cell), &v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": non-numeric cell"));
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::StatusOr<std::vector<RegressionPoint>> NormalizeRegressionRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows");
  const size_t width = rows[0].size();
  if (width < 2) {
    return absl::InvalidArgumentError("need at least one covariate and a target");
  }
  std::vector<double> lo(width, kInf);
  std::vector<double> hi(width, -kInf);
  for (const auto& row : rows) {
    if (row.size() != width) return absl::InvalidArgumentError("ragged rows");
    for (size_t j = 0; j < width; ++j) {
      if (!std::isfinite(row[j])) {
        return absl::InvalidArgumentError("non-finite value");
      }
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }
  auto rescale = [&](double v, size_t j) {
    if (hi[j] == lo[j]) return 0.0;
    return std::clamp(2.0 * (v - lo[j]) / (hi[j] - lo[j]) - 1.0, -1.0, 1.0);
  };
  std::vector<RegressionPoint> out;
  for (const auto& row : rows) {
    RegressionPoint p;
    for (size_t j = 0; j + 1 < width; ++j) p.covariates.push_back(rescale(row[j], j));
    p.target = rescale(row.back(), width - 1);
    out.push_back(std::move(p));
  }
  return out;
}

absl::StatusOr<RegressionSplit> SplitRegression(
    std::vector<RegressionPoint> points, size_t test_size, uint64_t seed) {
  if (test_size == 0 || test_size >= points.size()) {
    return absl::InvalidArgumentError(
        "test size must be positive and smaller than the dataset");
  }
  Rng rng(seed);
  for (size_t i = points.size() - 1; i > 0; --i) {
    std::swap(points[i], points[rng.UniformInt(i + 1)]);
  }
  RegressionSplit split;
  split.test.assign(points.begin(), points.begin() + test_size);
  split.train.assign(points.begin() + test_size, points.end());
  return split;
}

// ---- Sweeps ---------------------------------------------------------------

absl::StatusOr<SweepMethod> ParseSweepMethod(absl::string_view name) {
  SweepMethod m;
  m.name = std::string(name);
  if (name == "non-private") {
    m.kind = SweepMethod::Kind::kNonPrivate;
    m.alpha = PrivacyMapping::Constant(1);
    return m;
  }
  absl::string_view rest = name;
  if (absl::ConsumePrefix(&rest, "sm-t")) {
    if (!absl::SimpleAtod(rest, &m.t) || !(m.t > 0.0) || std::isinf(m.t)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad threshold in method '", name, "'"));
    }
    m.kind = SweepMethod::Kind::kSampleMechanism;
    m.alpha = PrivacyMapping::Epsilon();
    return m;
  }
  if (absl::ConsumePrefix(&rest, "lq-")) {
    const bool half = absl::ConsumeSuffix(&rest, "-half");
    if (rest == "eps") {
      m.alpha = PrivacyMapping::Epsilon();
    } else if (rest == "one-minus-exp") {
      m.alpha = PrivacyMapping::OneMinusExp();
    } else if (rest == "ratio") {
      m.alpha = PrivacyMapping::Ratio();
    } else if (rest == "const") {
      m.alpha = PrivacyMapping::Constant(1);
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown alpha family in method '", name, "'"));
    }
    if (half) m.alpha = PrivacyMapping::Scaled(m.alpha, 0.5);
    return m;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown method '", name, "' (lq-<family>[-half], sm-t<t>, non-private)"));
}

std::vector<std::string> DefaultMeanMethods() {
  return {"lq-eps-half", "lq-one-minus-exp-half", "lq-ratio-half", "sm-t2",
          "sm-t0.5"};
}

std::vector<std::string> DefaultFreqMethods() {
  return {"lq-eps-half", "lq-one-minus-exp-half", "lq-ratio-half", "sm-t0.1",
          "sm-t1"};
}

std::vector<std::string> DefaultRegressionMethods() {
  return {"lq-eps", "lq-one-minus-exp", "lq-ratio", "sm-t1", "non-private"};
}

double SweepResult::Value(absl::string_view method, int64_t size) const {
  for (const SweepRow& row : rows) {
    if (row.method == method && row.size == size) return row.value;
  }
  return kNaN;
}

absl::StatusOr<SweepResult> MeanSweep(const Dataset& data,
                                      const SweepConfig& config) {
  AHDP_ASSIGN_OR_RETURN(const auto methods, ParseMethods(config.methods, false));
  const MechanismOptions opts{.audit_mode = config.audit_mode};
  const MeanParams params{config.lower, config.upper, config.floor, config.clip};
  auto run = [&](const Dataset& sample, const SweepMethod& m,
                 Rng& rng) -> absl::StatusOr<double> {
    double truth = 0.0;
    for (const auto& [record, count] : sample) {
      truth += record.value.scalar() * static_cast<double>(count);
    }
    truth /= static_cast<double>(sample.size());
    double estimate;
    if (m.kind == SweepMethod::Kind::kSampleMechanism) {
      AHDP_ASSIGN_OR_RETURN(
          const MechanismReport r,
          SampleMechanism(sample, m.alpha, m.t,
                          SecondStage::Mean(config.lower, config.upper,
                                            config.floor),
                          rng, opts));
      estimate = r.scalar();
      if (config.clip) estimate = std::clamp(estimate, config.lower, config.upper);
    } else {
      AHDP_ASSIGN_OR_RETURN(
          const MechanismReport r,
          MeanEstimate(sample, params, m.alpha, m.alpha, rng, opts));
      estimate = r.scalar();
    }
    return (estimate - truth) * (estimate - truth);
  };
  return Sweep("mean", "mse", data, config, methods, run, false);
}

absl::StatusOr<SweepResult> FreqSweep(const Dataset& data,
                                      const SweepConfig& config) {
  AHDP_ASSIGN_OR_RETURN(const auto methods, ParseMethods(config.methods, false));
  const MechanismOptions opts{.audit_mode = config.audit_mode};
  auto run = [&](const Dataset& sample, const SweepMethod& m,
                 Rng& rng) -> absl::StatusOr<double> {
    std::vector<double> truth(config.bins, 0.0);
    for (const auto& [record, count] : sample) {
      if (record.value.kind() != ValueKind::kCategorical ||
          record.value.label() < 1 || record.value.label() > config.bins) {
        return absl::InvalidArgumentError(
            absl::StrCat("label outside 1..", config.bins, ": ",
                         EncodeRecord(record)));
      }
      truth[record.value.label() - 1] += static_cast<double>(count);
    }
    for (double& f : truth) f /= static_cast<double>(sample.size());
    MechanismReport r;
    if (m.kind == SweepMethod::Kind::kSampleMechanism) {
      AHDP_ASSIGN_OR_RETURN(
          r, SampleMechanism(sample, m.alpha, m.t,
                             SecondStage::Histogram(config.bins, config.floor),
                             rng, opts));
    } else {
      AHDP_ASSIGN_OR_RETURN(r, FrequencyEstimate(sample, config.bins, m.alpha,
                                                 m.alpha, config.floor, rng,
                                                 opts));
    }
    double worst = 0.0;
    for (int64_t i = 0; i < config.bins; ++i) {
      double est = r.output[i];
      if (config.clip) est = std::clamp(est, 0.0, 1.0);
      worst = std::max(worst, std::fabs(est - truth[i]));
    }
    return worst;
  };
  return Sweep("freq", "mean_linf", data, config, methods, run, false);
}

absl::StatusOr<SweepResult> RegressionSweep(
    const Dataset& train, const std::vector<RegressionPoint>& test,
    const SweepConfig& config) {
  std::vector<std::string> names = config.methods;
  if (std::find(names.begin(), names.end(), "non-private") == names.end()) {
    names.push_back("non-private");
  }
  AHDP_ASSIGN_OR_RETURN(const auto methods, ParseMethods(names, true));
  if (test.empty()) return absl::InvalidArgumentError("empty test set");
  const size_t d = test[0].covariates.size();
  for (const RegressionPoint& p : test) {
    if (p.covariates.size() != d) {
      return absl::InvalidArgumentError("mismatched test dimensions");
    }
  }
  for (const auto& [record, count] : train) {
    if (record.value.kind() != ValueKind::kRegression ||
        record.value.regression().covariates.size() != d) {
      return absl::InvalidArgumentError(absl::StrCat(
          "training record does not match the test dimension ", d, ": ",
          EncodeRecord(record)));
    }
  }
  const MechanismOptions opts{.audit_mode = config.audit_mode};
  auto residual = [&](const std::vector<double>& theta) {
    double total = 0.0;
    for (const RegressionPoint& p : test) {
      double fit = 0.0;
      for (size_t j = 0; j < d; ++j) fit += theta[j] * p.covariates[j];
      total += (p.target - fit) * (p.target - fit);
    }
    return total / static_cast<double>(test.size());
  };
  auto run = [&](const Dataset& sample, const SweepMethod& m,
                 Rng& rng) -> absl::StatusOr<double> {
    absl::StatusOr<std::vector<double>> theta;
    switch (m.kind) {
      case SweepMethod::Kind::kSampleMechanism: {
        SecondStage stage = SecondStage::Regression(config.ridge);
        stage.dimension = d;
        auto r = SampleMechanism(sample, m.alpha, m.t, stage, rng, opts);
        theta = r.ok() ? absl::StatusOr<std::vector<double>>(r->output)
                       : r.status();
        break;
      }
      case SweepMethod::Kind::kLinearQuery: {
        auto r = Regression(sample, m.alpha,
                            {.ridge = config.ridge, .mechanism = opts}, rng);
        theta = r.ok() ? absl::StatusOr<std::vector<double>>(r->theta)
                       : r.status();
        break;
      }
      case SweepMethod::Kind::kNonPrivate: {
        auto r = Regression(sample, m.alpha,
                            {.mechanism = {.audit_mode = true}}, rng);
        theta = r.ok() ? absl::StatusOr<std::vector<double>>(r->theta)
                       : r.status();
        break;
      }
    }
    if (!theta.ok()) {
      if (theta.status().code() == absl::StatusCode::kFailedPrecondition) {
        return kInf;  // unsolvable noisy system
      }
      return theta.status();
    }
    return residual(*theta);
  };
  return Sweep("regress", "median_residual", train, config, methods, run, true);
}

std::string SweepCsv(const SweepResult& result) {
  std::string out = "method,size,metric,value,trials,seed\n";
  for (const SweepRow& row : result.rows) {
    absl::StrAppend(&out, row.method, ",", row.size, ",", row.metric, ",",
                    FormatReal(row.value), ",", row.trials, ",", row.seed,
                    "\n");
  }
  return out;
}

std::string SweepJson(const SweepResult& result) {
  nlohmann::ordered_json config;
  config["sizes"] = result.config.sizes;
  config["trials"] = result.config.trials;
  config["methods"] = result.config.methods;
  config["seed"] = result.config.seed;
  config["threads"] = result.config.threads;
  config["audit_mode"] = result.config.audit_mode;
  config["floor"] = result.config.floor;
  config["clip"] = result.config.clip;
  config["lower"] = result.config.lower;
  config["upper"] = result.config.upper;
  config["bins"] = result.config.bins;
  config["ridge"] = result.config.ridge;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : result.rows) {
    nlohmann::ordered_json r;
    r["method"] = row.method;
    r["size"] = row.size;
    r["metric"] = row.metric;
    r["value"] = JsonNumber(row.value);
    r["trials"] = row.trials;
    r["seed"] = row.seed;
    rows.push_back(std::move(r));
  }
  nlohmann::ordered_json out;
  out["experiment"] = result.experiment;
  out["config"] = std::move(config);
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

// ---- Asymptotic bias ------------------------------------------------------

absl::StatusOr<double> JointMean(const std::vector<JointCell>& cells) {
  double total = 0.0;
  double mean = 0.0;
  for (const JointCell& c : cells) {
    if (!(c.probability >= 0.0)) {
      return absl::InvalidArgumentError("negative probability");
    }
    total += c.probability;
    mean += c.probability * c.x;
  }
  if (cells.empty() || std::fabs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError("joint probabilities must sum to 1");
  }
  return mean;
}

absl::StatusOr<double> PredictedAsymptoticMean(
    const std::vector<JointCell>& cells, const PrivacyMapping& alpha) {
  AHDP_RETURN_IF_ERROR(JointMean(cells).status());
  double ea = 0.0;
  double eax = 0.0;
  for (const JointCell& c : cells) {
    const double a = alpha.Evaluate(ScalarRecord(c.x, c.epsilon));
    if (!std::isfinite(a)) {
      return absl::InvalidArgumentError("alpha must be finite on the joint");
    }
    ea += c.probability * a;
    eax += c.probability * a * c.x;
  }
  if (!(ea > 0.0)) return absl::InvalidArgumentError("E[alpha] must be > 0");
  return eax / ea;
}

absl::StatusOr<BiasEstimate> AsymptoticBiasExperiment(
    const std::vector<JointCell>& cells, const PrivacyMapping& alpha,
    int64_t n, int reps, uint64_t seed) {
  if (n < 1 || reps < 2) {
    return absl::InvalidArgumentError("need n >= 1 and reps >= 2");
  }
  BiasEstimate out;
  AHDP_ASSIGN_OR_RETURN(out.true_mean, JointMean(cells));
  AHDP_ASSIGN_OR_RETURN(out.predicted, PredictedAsymptoticMean(cells, alpha));
  const Rng root(seed);
  std::vector<double> estimates;
  for (int r = 0; r < reps; ++r) {
    Rng rng = root.Derive(r);
    // Multinomial counts by sequential conditional binomials.
    Dataset data;
    int64_t remaining = n;
    double mass = 1.0;
    for (size_t i = 0; i < cells.size(); ++i) {
      int64_t k = remaining;
      if (i + 1 < cells.size()) {
        const double p = mass > 0 ? std::clamp(cells[i].probability / mass, 0.0, 1.0)
                                  : 0.0;
        k = std::binomial_distribution<int64_t>(remaining, p)(rng);
      }
      if (k > 0) {
        AHDP_RETURN_IF_ERROR(data.Insert(
            ScalarRecord(cells[i].x, cells[i].epsilon), static_cast<uint64_t>(k)));
      }
      remaining -= k;
      mass -= cells[i].probability;
    }
    AHDP_ASSIGN_OR_RETURN(
        const MechanismReport report,
        MeanEstimate(data, {.lower = 0.0, .upper = 1.0, .floor = 1.0}, alpha,
                     alpha, rng));
    estimates.push_back(report.scalar());
  }
  out.reps = reps;
  out.mean = Mean(estimates);
  double ss = 0.0;
  for (double e : estimates) ss += (e - out.mean) * (e - out.mean);
  out.standard_error = std::sqrt(ss / (reps - 1) / reps);
  return out;
}

}  // namespace ahdp
