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

#include "ahdp/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "ahdp/audit.h"
#include "ahdp/dataset.h"
#include "ahdp/dataset_csv.h"
#include "ahdp/experiments.h"
#include "ahdp/mechanisms.h"
#include "ahdp/power.h"
#include "ahdp/privacy.h"
#include "ahdp/rng.h"
#include "ahdp/status_macros.h"
#include "json.hpp"

namespace ahdp {
namespace {

using Json = nlohmann::ordered_json;

constexpr int64_t kDefaultTruncation = 6;
constexpr int kDefaultAuditPairs = 100;
constexpr int kDefaultProbes = 16;
constexpr int kSampleMechanismGridPoints = 101;
constexpr int64_t kDefaultWeightSize = 2200;
constexpr int64_t kDefaultEducationSize = 3000;
constexpr int64_t kDefaultRegressionSize = 20000;
constexpr size_t kDefaultRegressionDimension = 8;
constexpr size_t kDefaultTestSize = 2000;

Json Number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json Numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(Number(x));
  return out;
}

// ---- Config file ----------------------------------------------------------

bool HasFlag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const std::string& a : args) {
    if (a == flag || absl::StartsWith(a, flag + "=")) return true;
  }
  return false;
}

// Pulls `--config <path>` out of `args` and appends `--key=value` for every
// file entry whose flag is not already present.
absl::StatusOr<std::vector<std::string>> ApplyConfigFile(
    std::vector<std::string> args) {
  std::optional<std::string> path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size()) {
        return absl::InvalidArgumentError("--config needs a path");
      }
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (absl::StartsWith(args[i], "--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", *path));
  std::string line;
  int number = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++number;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view[0] == '#') continue;
    const size_t eq = view.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat(*path, ":", number, ": expected key=value"));
    }
    std::string key(absl::StripAsciiWhitespace(view.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(view.substr(eq + 1)));
    if (absl::StartsWith(key, "--")) key = key.substr(2);
    if (key.empty() || key == "config") {
      return absl::InvalidArgumentError(
          absl::StrCat(*path, ":", number, ": bad key"));
    }
    // An empty value means "unset" (as echoed for options left at default).
    if (value.empty()) continue;
    if (!HasFlag(args, key)) extra.push_back(absl::StrCat("--", key, "=", value));
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// Resolved value of every option of `app`, keyed by long flag name.
void EchoOptions(const CLI::App* app, Json& config) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames()[0];
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {  // flag
      config[name] = opt->as<bool>() ? "true" : "false";
    } else if (opt->count() > 0) {
      config[name] = absl::StrJoin(opt->results(), ",");
    } else {
      const std::string& d = opt->get_default_str();
      config[name] = d == "{}" || d == "[]" ? "" : d;
    }
  }
}

Json Echo(const CLI::App& root, const std::vector<const CLI::App*>& chain) {
  Json config;
  std::vector<std::string> names;
  for (const CLI::App* app : chain) names.push_back(app->get_name());
  config["command"] = absl::StrJoin(names, " ");
  EchoOptions(&root, config);
  for (const CLI::App* app : chain) EchoOptions(app, config);
  return config;
}

// ---- Shared parsing helpers -----------------------------------------------

absl::StatusOr<double> ParseEpsilon(const std::string& text) {
  AHDP_ASSIGN_OR_RETURN(PrivacyLevel level, ParsePrivacyLevel(text));
  return level.value();
}

// "x:eps,x:eps,..." over scalar data values.
absl::StatusOr<CorrelationDomain> ParseDomain(const std::string& text) {
  std::vector<Record> pairs;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    std::vector<absl::string_view> parts = absl::StrSplit(item, ':');
    double x;
    if (parts.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(parts[0]), &x)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad domain entry '", item, "' (want x:eps)"));
    }
    AHDP_ASSIGN_OR_RETURN(PrivacyLevel eps, ParsePrivacyLevel(
                                                absl::StripAsciiWhitespace(parts[1])));
    pairs.push_back(Record{DataValue::Scalar(x), eps});
  }
  if (pairs.empty()) return absl::InvalidArgumentError("empty domain");
  return CorrelationDomain(pairs);
}

absl::StatusOr<Dataset> ReadDataset(const std::string& path) {
  AHDP_ASSIGN_OR_RETURN(CsvDataset csv, ReadDatasetCsvFile(path));
  return csv.dataset;
}

int64_t MaxLabel(const Dataset& dataset) {
  int64_t bins = 0;
  for (const auto& [record, count] : dataset) {
    if (record.value.kind() == ValueKind::kCategorical) {
      bins = std::max(bins, record.value.label());
    }
  }
  return bins;
}

// ---- Subcommand state -----------------------------------------------------

struct Globals {
  uint64_t seed = 0;
  bool audit_mode = false;
};

struct MechanismFlags {
  std::string input;
  std::string alpha = "epsilon";
  std::string alpha2;
  double t = 1.0;
  double floor = 1.0;
  double ridge = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  int64_t bins = 0;
  bool clip = false;
  bool symmetrize = false;
  std::string stage = "count";
};

struct AuditFlags {
  std::string mech;
  int pairs = kDefaultAuditPairs;
  std::string alpha = "epsilon";
  std::string alpha2;
  int probes = kDefaultProbes;
  double lower = 0.0;
  double upper = 1.0;
  int64_t bins = 2;
  size_t dimension = 2;
  double t = 1.0;
  std::string stage = "count";
};

struct PowerFlags {
  std::string claim;
  int64_t k = 2;
  std::string eps = "1";
  std::string domain;
  std::string horizon = "1";
  int64_t truncate = kDefaultTruncation;
};

struct GenFlags {
  std::string kind;
  int64_t n = 0;
  std::string output;
  double target_corr = -0.84;
  bool independent = false;
  double link_scale = 10.0;
  std::string contingency;
  std::string input;
  size_t dimension = kDefaultRegressionDimension;
};

struct SweepFlags {
  std::string input;
  std::vector<int64_t> sizes;
  int trials = 0;
  std::vector<std::string> methods;
  int threads = 1;
  std::string out_dir = ".";
  double floor = 1.0;
  bool no_clip = false;
  double lower = kWeightLower;
  double upper = kWeightUpper;
  int64_t bins = kEducationLevels;
  double ridge = 0.0;
  size_t test_size = kDefaultTestSize;
};

// ---- Mechanisms -----------------------------------------------------------

absl::StatusOr<Json> RunMechanism(const std::string& command,
                                  const MechanismFlags& f, const Globals& g) {
  AHDP_ASSIGN_OR_RETURN(const Dataset data, ReadDataset(f.input));
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping alpha, ParseMapping(f.alpha));
  PrivacyMapping alpha2 = alpha;
  if (!f.alpha2.empty()) {
    AHDP_ASSIGN_OR_RETURN(alpha2, ParseMapping(f.alpha2));
  }
  const MechanismOptions opts{.audit_mode = g.audit_mode};
  const int64_t bins = f.bins > 0 ? f.bins : MaxLabel(data);
  Rng rng(g.seed);
  Json out;
  MechanismReport report;
  if (command == "sum") {
    AHDP_ASSIGN_OR_RETURN(
        report, SumEstimate(data, f.lower, f.upper, alpha, rng, opts));
  } else if (command == "count") {
    AHDP_ASSIGN_OR_RETURN(report, CountEstimate(data, alpha, rng, opts));
  } else if (command == "mean") {
    AHDP_ASSIGN_OR_RETURN(
        report, MeanEstimate(data, {f.lower, f.upper, f.floor, f.clip}, alpha,
                             alpha2, rng, opts));
  } else if (command == "freq") {
    AHDP_ASSIGN_OR_RETURN(report, FrequencyEstimate(data, bins, alpha, alpha2,
                                                    f.floor, rng, opts));
  } else if (command == "sample-mech") {
    AHDP_ASSIGN_OR_RETURN(const SecondStage::Kind kind,
                          ParseSecondStageKind(f.stage));
    SecondStage stage;
    switch (kind) {
      case SecondStage::Kind::kSum:
        stage = SecondStage::Sum(f.lower, f.upper);
        break;
      case SecondStage::Kind::kCount:
        stage = SecondStage::Count();
        break;
      case SecondStage::Kind::kMean:
        stage = SecondStage::Mean(f.lower, f.upper, f.floor);
        break;
      case SecondStage::Kind::kHistogram:
        stage = SecondStage::Histogram(bins, f.floor);
        break;
      case SecondStage::Kind::kRegression:
        stage = SecondStage::Regression(f.ridge);
        break;
    }
    AHDP_ASSIGN_OR_RETURN(report,
                          SampleMechanism(data, alpha, f.t, stage, rng, opts));
  } else {  // regress
    AHDP_ASSIGN_OR_RETURN(
        const RegressionOutput r,
        Regression(data, alpha,
                   {.ridge = f.ridge, .symmetrize = f.symmetrize,
                    .mechanism = opts},
                   rng));
    out["output"] = Numbers(r.theta);
    out["spent_description"] = r.spent.Describe();
    out["seed"] = r.seed;
    Json flags = Json::array();
    if (r.ridge_fallback) flags.push_back("ridge_fallback");
    out["flags"] = std::move(flags);
    out["condition"] = Number(r.condition);
    out["ridge_used"] = r.ridge_used;
    if (r.a) out["noiseless_a"] = Numbers(*r.a);
    if (r.b) out["noiseless_b"] = Numbers(*r.b);
    return out;
  }
  out["output"] = Numbers(report.output);
  out["spent_description"] = report.spent.Describe();
  out["seed"] = report.seed;
  out["flags"] = report.flags;
  if (report.noiseless_part) {
    out["noiseless_part"] = Numbers(*report.noiseless_part);
  }
  return out;
}

// ---- Audit ----------------------------------------------------------------

Json ReportJson(const AuditReport& r) {
  Json j;
  j["mechanism"] = r.mechanism;
  j["dataset"] = r.dataset;
  j["neighbor"] = r.neighbor;
  j["claimed"] = Number(r.claimed);
  j["observed"] = Number(r.observed);
  j["margin"] = Number(r.margin);
  j["pass"] = r.pass;
  return j;
}

AuditTarget StageAuditTarget(SecondStage::Kind kind) {
  switch (kind) {
    case SecondStage::Kind::kSum:
    case SecondStage::Kind::kMean:
      return AuditTarget::kSum;
    case SecondStage::Kind::kCount:
      return AuditTarget::kCount;
    case SecondStage::Kind::kHistogram:
      return AuditTarget::kFrequencyVector;
    case SecondStage::Kind::kRegression:
      return AuditTarget::kRegressionEntries;
  }
  return AuditTarget::kCount;
}

// Returns the report array and whether every report passed.
absl::StatusOr<std::pair<Json, bool>> RunAudit(const AuditFlags& f,
                                               const Globals& g) {
  if (f.pairs < 1) return absl::InvalidArgumentError("--pairs must be >= 1");
  AHDP_ASSIGN_OR_RETURN(const PrivacyMapping alpha, ParseMapping(f.alpha));
  PrivacyMapping alpha2 = alpha;
  if (!f.alpha2.empty()) {
    AHDP_ASSIGN_OR_RETURN(alpha2, ParseMapping(f.alpha2));
  }
  AuditSpec spec{.alpha1 = alpha, .alpha2 = alpha2, .lower = f.lower,
                 .upper = f.upper, .bins = f.bins, .dimension = f.dimension};
  const Rng root(g.seed);
  Json reports = Json::array();
  bool all_pass = true;
  if (f.mech == "sample-mech") {
    AHDP_ASSIGN_OR_RETURN(const SecondStage::Kind kind,
                          ParseSecondStageKind(f.stage));
    SecondStage stage;
    switch (kind) {
      case SecondStage::Kind::kSum:
        stage = SecondStage::Sum(f.lower, f.upper);
        break;
      case SecondStage::Kind::kCount:
        stage = SecondStage::Count();
        break;
      case SecondStage::Kind::kMean:
        stage = SecondStage::Mean(f.lower, f.upper);
        break;
      case SecondStage::Kind::kHistogram:
        stage = SecondStage::Histogram(f.bins);
        break;
      case SecondStage::Kind::kRegression:
        stage = SecondStage::Regression();
        stage.dimension = f.dimension;
        break;
    }
    spec.target = StageAuditTarget(kind);
    for (int i = 0; i < f.pairs; ++i) {
      Rng rng = root.Derive(i);
      auto [d, d2] = RandomAuditPair(spec, rng, /*max_size=*/6);
      std::vector<Record> extra;
      for (const auto& [record, count] : d2) extra.push_back(record);
      AHDP_ASSIGN_OR_RETURN(
          const auto grid,
          SampleMechanismGrid(d, f.t, stage, kSampleMechanismGridPoints));
      AHDP_ASSIGN_OR_RETURN(
          const auto batch,
          SampleMechanismBruteForce(d, alpha, f.t, stage, grid, extra));
      for (const AuditReport& r : batch) {
        all_pass = all_pass && r.pass;
        reports.push_back(ReportJson(r));
      }
    }
    return std::make_pair(std::move(reports), all_pass);
  }
  absl::StatusOr<AuditTarget> target = ParseAuditTarget(f.mech);
  if (!target.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        target.status().message(), " or sample-mech"));
  }
  spec.target = *target;
  for (int i = 0; i < f.pairs; ++i) {
    Rng rng = root.Derive(i);
    auto [d, d2] = RandomAuditPair(spec, rng);
    AHDP_ASSIGN_OR_RETURN(const AuditReport r,
                          DensityRatioAudit(spec, d, d2, f.probes, rng));
    all_pass = all_pass && r.pass;
    reports.push_back(ReportJson(r));
  }
  return std::make_pair(std::move(reports), all_pass);
}

// ---- Power ----------------------------------------------------------------

std::vector<Record> SwapValues(int64_t k, double eps) {
  std::vector<Record> values;
  for (int64_t i = 1; i <= k; ++i) values.push_back(CategoryRecord(i, eps));
  return values;
}

absl::StatusOr<Json> RunPower(const PowerFlags& f) {
  AHDP_ASSIGN_OR_RETURN(const double eps, ParseEpsilon(f.eps));
  AHDP_ASSIGN_OR_RETURN(const Horizon horizon, ParseHorizon(f.horizon));
  if (f.truncate < 0) return absl::InvalidArgumentError("--truncate must be >= 0");
  const int64_t t = horizon == Horizon::kOne ? 1 : f.truncate;
  PowerResult bound;
  std::optional<ThreatModel> model;
  std::optional<DiscreteMechanism> mechanism;
  std::string achieving;
  if (f.claim == "swap") {
    AHDP_ASSIGN_OR_RETURN(bound, PowerBoundSwap(f.k, eps));
    AHDP_ASSIGN_OR_RETURN(model, SwapThreatModel(Dataset(), SwapValues(f.k, eps)));
    mechanism = MakeExponentialMechanism(
        *model, {.kind = ExponentialKind::kSwapRandomizedResponse,
                 .epsilon = eps});
    achieving = "randomized response";
  } else if (f.claim == "addremove") {
    AHDP_ASSIGN_OR_RETURN(bound, PowerBoundAddRemove(f.k, eps, horizon));
    const CorrelationDomain w(SwapValues(f.k, eps));
    AHDP_ASSIGN_OR_RETURN(
        model, AppendThreatModel(Dataset(), w, t, PowerTarget::kExactDataset));
    mechanism = MakeExponentialMechanism(
        *model, {.kind = ExponentialKind::kAddRemove,
                 .alpha = PrivacyMapping::Epsilon()});
    achieving = absl::StrCat("exponential add-remove on H_", t);
  } else if (f.claim == "ahdp") {
    if (f.domain.empty()) {
      return absl::InvalidArgumentError("--claim ahdp needs --domain");
    }
    AHDP_ASSIGN_OR_RETURN(const CorrelationDomain w, ParseDomain(f.domain));
    AHDP_ASSIGN_OR_RETURN(bound, PowerBoundAhdp(w, horizon));
    AHDP_ASSIGN_OR_RETURN(
        model, AppendThreatModel(Dataset(), w, t, PowerTarget::kDataProjection));
    mechanism = MakeExponentialMechanism(
        *model, {.kind = ExponentialKind::kProjected, .domain = w});
    achieving = absl::StrCat("projected exponential on H_", t);
  } else if (f.claim == "pair") {
    AHDP_ASSIGN_OR_RETURN(bound, PowerBoundPair(eps));
    const Record r = ScalarRecord(0, eps);
    AHDP_ASSIGN_OR_RETURN(
        model, PairThreatModel(Dataset(), r, PowerTarget::kDataProjection));
    mechanism = MakeExponentialMechanism(
        *model,
        {.kind = ExponentialKind::kProjected, .domain = CorrelationDomain({r})});
    achieving = "projected exponential on H(x, eps)";
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown claim '", f.claim, "' (swap|addremove|ahdp|pair)"));
  }
  AHDP_ASSIGN_OR_RETURN(const PowerResult achieved,
                        ExactPower(*mechanism, *model, Classifier::kIdentity));
  Json out;
  out["upper"] = Number(bound.upper);
  out["lower"] = Number(bound.lower);
  out["exact"] = Number(*achieved.exact);
  out["exact_mechanism"] = achieving;
  out["trivial_floor"] = Number(achieved.trivial_floor);
  out["degenerate"] = bound.degenerate;
  return out;
}

// ---- Data generation ------------------------------------------------------

absl::StatusOr<Contingency> ReadContingency(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  AHDP_ASSIGN_OR_RETURN(auto rows, ReadNumericCsv(in));
  return rows;
}

absl::StatusOr<std::vector<RegressionPoint>> RegressionBase(
    const std::string& input, int64_t n, size_t dimension, uint64_t seed) {
  if (input.empty()) {
    if (dimension == 0) return absl::InvalidArgumentError("--dimension must be >= 1");
    return SyntheticRegressionBase(n, dimension, seed);
  }
  std::ifstream in(input);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", input));
  AHDP_ASSIGN_OR_RETURN(auto rows, ReadNumericCsv(in));
  return NormalizeRegressionRows(rows);
}

absl::StatusOr<Json> RunGenData(const GenFlags& f, const Globals& g) {
  Dataset data;
  Json stats;
  if (f.kind == "weight") {
    const int64_t n = f.n > 0 ? f.n : kDefaultWeightSize;
    AHDP_ASSIGN_OR_RETURN(
        data, GenWeightEps(n, g.seed,
                           {.target_corr = f.target_corr,
                            .independent = f.independent,
                            .link_scale = f.link_scale}));
    std::vector<double> w, e;
    ScalarColumns(data, w, e);
    stats["correlation"] = Number(PearsonCorrelation(w, e));
  } else if (f.kind == "education") {
    const int64_t n = f.n > 0 ? f.n : kDefaultEducationSize;
    Contingency table = DefaultEducationContingency();
    if (!f.contingency.empty()) {
      AHDP_ASSIGN_OR_RETURN(table, ReadContingency(f.contingency));
    }
    AHDP_ASSIGN_OR_RETURN(data, GenEducationEps(n, g.seed, table));
    AHDP_ASSIGN_OR_RETURN(const auto counts, EducationCounts(data));
    AHDP_ASSIGN_OR_RETURN(const ChiSquared chi, ChiSquaredIndependence(counts));
    stats["chi_squared"] = Number(chi.statistic);
    stats["dof"] = chi.dof;
    stats["p_value"] = Number(chi.p_value);
  } else if (f.kind == "regression") {
    const int64_t n = f.n > 0 ? f.n : kDefaultRegressionSize;
    AHDP_ASSIGN_OR_RETURN(auto base,
                          RegressionBase(f.input, n, f.dimension, g.seed));
    if (!f.input.empty() && f.n > 0 && static_cast<size_t>(f.n) < base.size()) {
      base.resize(f.n);
    }
    AHDP_ASSIGN_OR_RETURN(data, GenRegressionEps(base, g.seed));
    double mean_log = 0.0;
    for (const auto& [record, count] : data) {
      mean_log += std::log(record.epsilon.value()) * static_cast<double>(count);
    }
    stats["mean_log_epsilon"] = Number(mean_log / static_cast<double>(data.size()));
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown kind '", f.kind, "' (weight|education|regression)"));
  }
  AHDP_RETURN_IF_ERROR(WriteDatasetCsvFile(f.output, data));
  Json out;
  out["output"] = f.output;
  out["size"] = data.size();
  out["support"] = data.support_size();
  out["stats"] = std::move(stats);
  return out;
}

// ---- Sweeps ---------------------------------------------------------------

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << contents;
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("short write to ", path));
}

absl::StatusOr<Json> RunSweep(const std::string& experiment,
                              const SweepFlags& f, const Globals& g,
                              const Json& echo) {
  SweepConfig config;
  config.seed = g.seed;
  config.audit_mode = g.audit_mode;
  config.threads = f.threads;
  config.floor = f.floor;
  config.clip = !f.no_clip;
  config.lower = f.lower;
  config.upper = f.upper;
  config.bins = f.bins;
  config.ridge = f.ridge;
  config.sizes = f.sizes;
  config.methods = f.methods;
  config.trials = f.trials;
  absl::StatusOr<SweepResult> result;
  if (experiment == "mean") {
    if (config.sizes.empty()) config.sizes = {100, 200, 500, 1000, 2000};
    if (config.methods.empty()) config.methods = DefaultMeanMethods();
    if (config.trials == 0) config.trials = kDefaultMeanTrials;
    Dataset data;
    if (f.input.empty()) {
      AHDP_ASSIGN_OR_RETURN(data, GenWeightEps(kDefaultWeightSize, g.seed));
    } else {
      AHDP_ASSIGN_OR_RETURN(data, ReadDataset(f.input));
    }
    result = MeanSweep(data, config);
  } else if (experiment == "freq") {
    if (config.sizes.empty()) config.sizes = {100, 200, 500, 1000, 2000};
    if (config.methods.empty()) config.methods = DefaultFreqMethods();
    if (config.trials == 0) config.trials = kDefaultFreqTrials;
    Dataset data;
    if (f.input.empty()) {
      AHDP_ASSIGN_OR_RETURN(data,
                            GenEducationEps(kDefaultEducationSize, g.seed,
                                            DefaultEducationContingency()));
    } else {
      AHDP_ASSIGN_OR_RETURN(data, ReadDataset(f.input));
    }
    result = FreqSweep(data, config);
  } else {
    if (config.sizes.empty()) {
      config.sizes = {500, 1000, 2000, 5000, 10000, 18000};
    }
    if (config.methods.empty()) config.methods = DefaultRegressionMethods();
    if (config.trials == 0) config.trials = kDefaultRegressionTrials;
    RegressionSplit split;
    Dataset train;
    if (f.input.empty()) {
      AHDP_ASSIGN_OR_RETURN(
          split, SplitRegression(
                     SyntheticRegressionBase(kDefaultRegressionSize,
                                             kDefaultRegressionDimension, g.seed),
                     f.test_size, g.seed));
      AHDP_ASSIGN_OR_RETURN(train, GenRegressionEps(split.train, g.seed));
    } else {
      // Held-out users lose their demands; the rest keep theirs.
      AHDP_ASSIGN_OR_RETURN(const Dataset all, ReadDataset(f.input));
      std::vector<Record> users;
      for (const auto& [record, count] : all) {
        for (uint64_t c = 0; c < count; ++c) users.push_back(record);
      }
      if (f.test_size == 0 || f.test_size >= users.size()) {
        return absl::InvalidArgumentError("--test-size must be in [1, size)");
      }
      Rng rng = Rng(g.seed).Derive(0);
      for (size_t i = users.size() - 1; i > 0; --i) {
        std::swap(users[i], users[rng.UniformInt(i + 1)]);
      }
      for (size_t i = 0; i < users.size(); ++i) {
        if (users[i].value.kind() != ValueKind::kRegression) {
          return absl::InvalidArgumentError(
              "sweep regress needs a regression dataset");
        }
        if (i < f.test_size) {
          split.test.push_back(users[i].value.regression());
        } else {
          AHDP_RETURN_IF_ERROR(train.Insert(users[i]));
        }
      }
    }
    result = RegressionSweep(train, split.test, config);
  }
  AHDP_RETURN_IF_ERROR(result.status());
  Json out = Json::parse(SweepJson(*result));
  out["cli_config"] = echo;
  const std::string dir = f.out_dir.empty() ? "." : f.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::string csv_path = (std::filesystem::path(dir) / "results.csv").string();
  const std::string json_path =
      (std::filesystem::path(dir) / "results.json").string();
  AHDP_RETURN_IF_ERROR(WriteFile(csv_path, SweepCsv(*result)));
  AHDP_RETURN_IF_ERROR(WriteFile(json_path, out.dump(2) + "\n"));
  return out;
}

// ---- Wiring ---------------------------------------------------------------

void AddMechanismFlags(CLI::App* sub, MechanismFlags& f, bool range,
                       bool second_part, bool floor, bool bins) {
  sub->add_option("--input", f.input, "Dataset CSV")->required();
  sub->add_option("--alpha", f.alpha,
                  "Mapping: epsilon, one-minus-exp, ratio, capped:<t>, "
                  "scaled:<name>:<factor>, constant:<c>");
  if (second_part) {
    sub->add_option("--alpha2", f.alpha2, "Denominator mapping (default --alpha)");
  }
  if (range) {
    sub->add_option("--lower", f.lower, "Lower end of the value range");
    sub->add_option("--upper", f.upper, "Upper end of the value range");
  }
  if (floor) sub->add_option("--floor", f.floor, "Denominator floor");
  if (bins) sub->add_option("--bins", f.bins, "Labels 1..bins (0: max label)");
}

}  // namespace

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out,
           std::ostream& err) {
  absl::StatusOr<std::vector<std::string>> args = ApplyConfigFile(raw_args);
  if (!args.ok()) {
    err << "error: " << args.status().message() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Heterogeneous differential privacy workbench", "ahdp"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Root RNG seed");
#ifdef AHDP_CLI_AUDIT_MODE
  app.add_flag("--audit-mode", g.audit_mode,
               "Suppress all noise and expose noiseless parts (tests only)");
#endif

  MechanismFlags mf;
  std::map<std::string, CLI::App*> mechanisms;
  auto add_mech = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    mechanisms[name] = sub;
    return sub;
  };
  AddMechanismFlags(add_mech("sum", "Bounded sum"), mf, true, false, false,
                    false);
  AddMechanismFlags(add_mech("count", "Weighted count"), mf, false, false,
                    false, false);
  {
    CLI::App* sub = add_mech("mean", "Mean estimate");
    AddMechanismFlags(sub, mf, true, true, true, false);
    sub->add_flag("--clip", mf.clip, "Clip the ratio to [lower, upper]");
  }
  AddMechanismFlags(add_mech("freq", "Relative frequencies"), mf, false, true,
                    true, true);
  {
    CLI::App* sub = add_mech("regress", "Functional-mechanism regression");
    AddMechanismFlags(sub, mf, false, false, false, false);
    sub->add_option("--ridge", mf.ridge, "Ridge added before solving");
    sub->add_flag("--symmetrize", mf.symmetrize, "Solve with (A + A^T) / 2");
  }
  {
    CLI::App* sub = add_mech("sample-mech", "Sample Mechanism");
    AddMechanismFlags(sub, mf, true, false, true, true);
    sub->add_option("--t", mf.t, "Threshold t > 0");
    sub->add_option("--stage", mf.stage,
                    "Second stage: sum, count, mean, histogram, regression");
    sub->add_option("--ridge", mf.ridge, "Ridge for the regression stage");
  }

  AuditFlags af;
  CLI::App* audit = app.add_subcommand("audit", "Density-ratio audits");
  audit->add_option("--mech", af.mech,
                    "linear-query, sum, count, mean-parts, frequency-vector, "
                    "regression-entries or sample-mech")
      ->required();
  audit->add_option("--pairs", af.pairs, "Random neighbor pairs");
  audit->add_option("--alpha", af.alpha, "Mapping");
  audit->add_option("--alpha2", af.alpha2, "Second-part mapping");
  audit->add_option("--probes", af.probes, "Random probes per coordinate");
  audit->add_option("--lower", af.lower, "Query range lower end");
  audit->add_option("--upper", af.upper, "Query range upper end");
  audit->add_option("--bins", af.bins, "Labels for frequency-vector");
  audit->add_option("--dimension", af.dimension, "Covariates for regression");
  audit->add_option("--t", af.t, "Threshold for sample-mech");
  audit->add_option("--stage", af.stage, "Second stage for sample-mech");

  PowerFlags pf;
  CLI::App* power = app.add_subcommand("power", "Adversary power bounds");
  power->add_option("--claim", pf.claim, "swap, addremove, ahdp or pair")
      ->required();
  power->add_option("--k", pf.k, "Number of data values");
  power->add_option("--eps", pf.eps, "Privacy demand (accepts inf)");
  power->add_option("--domain", pf.domain, "W as x:eps,x:eps,...");
  power->add_option("--horizon", pf.horizon, "1 or inf");
  power->add_option("--truncate", pf.truncate,
                    "Append depth for the achieving mechanism under inf");

  GenFlags gf;
  CLI::App* gen = app.add_subcommand("gen-data", "Synthetic datasets");
  gen->add_option("--kind", gf.kind, "weight, education or regression")
      ->required();
  gen->add_option("--n", gf.n, "Users (0: kind default)");
  gen->add_option("--output", gf.output, "Dataset CSV to write")->required();
  gen->add_option("--target-corr", gf.target_corr, "weight: correlation");
  gen->add_flag("--independent", gf.independent, "weight: independent eps");
  gen->add_option("--link-scale", gf.link_scale, "weight: logistic width");
  gen->add_option("--contingency", gf.contingency,
                  "education: 6x5 probability CSV");
  gen->add_option("--input", gf.input,
                  "regression: raw numeric CSV x1..xd,y (default synthetic)");
  gen->add_option("--dimension", gf.dimension, "regression: synthetic d");

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "Error sweeps");
  sweep->require_subcommand(1, 1);
  sweep->fallthrough();
  std::map<std::string, CLI::App*> sweeps;
  for (const char* name : {"mean", "freq", "regress"}) {
    CLI::App* sub = sweep->add_subcommand(name, std::string(name) + " sweep");
    sub->fallthrough();
    sweeps[name] = sub;
    sub->add_option("--input", sf.input, "Dataset CSV (default: generated)");
    sub->add_option("--sizes", sf.sizes, "Comma-separated sample sizes")
        ->delimiter(',');
    sub->add_option("--trials", sf.trials, "Trials per size (0: default)");
    sub->add_option("--methods", sf.methods, "Comma-separated methods")
        ->delimiter(',');
    sub->add_option("--threads", sf.threads, "Worker threads");
    sub->add_option("--out-dir", sf.out_dir, "Where results.csv/json go");
    if (std::string(name) != "regress") {
      sub->add_option("--floor", sf.floor, "Denominator floor");
      sub->add_flag("--no-clip", sf.no_clip, "Do not clip estimates");
    }
    if (std::string(name) == "mean") {
      sub->add_option("--lower", sf.lower, "Value range lower end");
      sub->add_option("--upper", sf.upper, "Value range upper end");
    }
    if (std::string(name) == "freq") {
      sub->add_option("--bins", sf.bins, "Number of labels");
    }
    if (std::string(name) == "regress") {
      sub->add_option("--ridge", sf.ridge, "Ridge added before solving");
      sub->add_option("--test-size", sf.test_size, "Held-out users");
    }
  }

  std::vector<std::string> reversed(args->rbegin(), args->rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<const CLI::App*> chain;
  for (const CLI::App* sub = app.get_subcommands().front(); sub != nullptr;) {
    chain.push_back(sub);
    auto next = sub->get_subcommands();
    sub = next.empty() ? nullptr : next.front();
  }
  const Json echo = Echo(app, chain);
  const std::string command = chain.front()->get_name();

  auto fail = [&](const absl::Status& status) {
    err << "error: " << status.message() << "\n";
    return kExitUsage;
  };
  auto emit = [&](Json body) {
    Json result;
    result["command"] = echo["command"];
    result["config"] = echo;
    for (auto& [key, value] : body.items()) result[key] = value;
    out << result.dump(2) << "\n";
  };

  if (mechanisms.count(command)) {
    auto body = RunMechanism(command, mf, g);
    if (!body.ok()) return fail(body.status());
    emit(*std::move(body));
    return kExitOk;
  }
  if (command == "audit") {
    auto result = RunAudit(af, g);
    if (!result.ok()) return fail(result.status());
    auto& [reports, pass] = *result;
    int passed = 0;
    for (const auto& r : reports) passed += r["pass"].get<bool>();
    const int failed = static_cast<int>(reports.size()) - passed;
    Json body;
    body["passed"] = passed;
    body["failed"] = failed;
    body["reports"] = std::move(reports);
    emit(std::move(body));
    if (!pass) {
      err << "audit failed: " << failed << " report(s) exceed the claim\n";
      return kExitAuditFailure;
    }
    return kExitOk;
  }
  if (command == "power") {
    auto body = RunPower(pf);
    if (!body.ok()) return fail(body.status());
    emit(*std::move(body));
    return kExitOk;
  }
  if (command == "gen-data") {
    auto body = RunGenData(gf, g);
    if (!body.ok()) return fail(body.status());
    emit(*std::move(body));
    return kExitOk;
  }
  // sweep
  auto body = RunSweep(chain.back()->get_name(), sf, g, echo);
  if (!body.ok()) return fail(body.status());
  out << body->dump(2) << "\n";
  return kExitOk;
}

}  // namespace ahdp
