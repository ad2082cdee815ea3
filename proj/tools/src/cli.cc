//
// Copyright 2026 The rdp Authors.
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
//

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "rdp/dataset.h"
#include "rdp/json_io.h"
#include "rdp/mechanism.h"
#include "rdp/privacy.h"
#include "rdp/utility.h"
#include "rdp/verify.h"

namespace rdp::cli {
namespace {

using nlohmann::json;

constexpr FamilyKind kAllFamilies[] = {
    FamilyKind::kDegenerate, FamilyKind::kBernoulli, FamilyKind::kGamma,
    FamilyKind::kUniform, FamilyKind::kTruncGauss};
constexpr FamilyKind kCombinedFamilies[] = {
    FamilyKind::kGamma, FamilyKind::kUniform, FamilyKind::kTruncGauss};

// Reads TOML/INI through CLI11 and JSON through nlohmann. Keys outside any
// section are attributed to the subcommand being run.
class FlexibleConfig : public CLI::ConfigTOML {
 public:
  explicit FlexibleConfig(std::string section) : section_(std::move(section)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text((std::istreambuf_iterator<char>(input)),
                           std::istreambuf_iterator<char>());
    std::vector<CLI::ConfigItem> items;
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
      if (root.is_discarded()) {
        throw CLI::ConversionError("config", "config file is not valid JSON");
      }
      Flatten(root, {}, items);
    } else {
      std::istringstream stream(text);
      items = CLI::ConfigTOML::from_config(stream);
    }
    if (!section_.empty()) {
      for (CLI::ConfigItem& item : items) {
        if (item.parents.empty() && item.name != "++" && item.name != "--") {
          item.parents.push_back(section_);
        }
      }
    }
    return items;
  }

 private:
  static std::string Scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  static void Flatten(const json& node, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_object()) {
        std::vector<std::string> sub = parents;
        sub.push_back(key);
        Flatten(value, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const json& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  std::string section_;
};

absl::Status WriteOutput(const std::string& path, const std::string& text,
                         std::ostream& out) {
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) return absl::InvalidArgumentError(absl::StrCat("cannot write ", path));
  file << text;
  return file ? absl::OkStatus()
              : absl::InternalError(absl::StrCat("failed writing ", path));
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

template <class F>
void ParallelFor(int n, F&& fn) {
  const int threads = std::clamp(
      static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

// Flags shared by optimize, run and sweep.
struct SearchFlags {
  std::string metric = "usefulness";
  std::string families = "all";
  int restarts = 64;
  std::vector<std::string> bounds;
  int threads = 0;

  void Register(CLI::App* app, int default_restarts) {
    restarts = default_restarts;
    app->add_option("--metric", metric,
                    "usefulness, l1, l2 or entropy")
        ->capture_default_str();
    app->add_option("--families", families,
                    "comma list of families, 'all', or 'combined'")
        ->capture_default_str();
    app->add_option("--restarts", restarts, "multistart count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--bound", bounds,
                    "search box override name=lo:hi (repeatable)");
    app->add_option("--threads", threads, "worker threads, 0 = all cores")
        ->capture_default_str();
  }

  absl::Status Apply(OptimizationProblem* p) const {
    absl::StatusOr<Metric> m = ParseMetric(metric);
    if (!m.ok()) return m.status();
    p->metric = *m;
    if (absl::Status s = ParseFamilies(families, &p->families, &p->combined);
        !s.ok()) {
      return s;
    }
    p->restarts = restarts;
    p->threads = threads;
    for (const std::string& b : bounds) {
      if (absl::Status s = ApplyBound(b, &p->bounds); !s.ok()) return s;
    }
    return absl::OkStatus();
  }
};

// ---- analyze ----

struct AnalyzeFlags {
  std::string spec;
  double sensitivity = 1.0;
  double gamma = 1.0;
};

int RunAnalyze(const AnalyzeFlags& f, std::ostream& out, std::ostream& err) {
  if (f.spec.empty()) return Fail(absl::InvalidArgumentError("--spec is required"), err);
  absl::StatusOr<DistributionSpec> spec = LoadSpecFile(f.spec);
  if (!spec.ok()) return Fail(spec.status(), err);
  absl::StatusOr<PrivacyReport> privacy = AnalyzePrivacy(*spec, f.sensitivity);
  if (!privacy.ok()) return Fail(privacy.status(), err);
  absl::StatusOr<UtilityReport> utility = AnalyzeUtility(*spec, f.gamma);
  if (!utility.ok()) return Fail(utility.status(), err);
  const json report = {{"spec", SpecToJson(*spec)},
                       {"spec_compact", CompactSpecString(*spec)},
                       {"privacy", ToJson(*privacy)},
                       {"utility", ToJson(*utility)}};
  out << report.dump(2) << "\n";
  return kExitOk;
}

// ---- optimize ----

struct OptimizeFlags {
  std::optional<double> epsilon;
  double sensitivity = 1.0;
  double gamma = 1.0;
  uint64_t seed = 0;
  std::string out;
  SearchFlags search;
};

int RunOptimize(const OptimizeFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.epsilon.has_value()) {
    return Fail(absl::InvalidArgumentError("--epsilon is required"), err);
  }
  OptimizationProblem problem;
  problem.eps_target = *f.epsilon;
  problem.delta_q = f.sensitivity;
  problem.gamma = f.gamma;
  problem.seed = f.seed;
  if (absl::Status s = f.search.Apply(&problem); !s.ok()) return Fail(s, err);
  absl::StatusOr<OptimizationResult> result = Optimize(problem);
  if (!result.ok()) return Fail(result.status(), err);
  absl::Status written =
      WriteOutput(f.out, ToJson(*result).dump(2) + "\n", out);
  return written.ok() ? kExitOk : Fail(written, err);
}

// ---- run ----

struct RunFlags {
  std::string data;
  std::string column;
  std::string query = "count";
  std::vector<double> clip;
  std::optional<double> epsilon;
  double gamma = 1.0;
  uint64_t seed = 0;
  std::string spec;
  SearchFlags search;
};

int RunRelease(const RunFlags& f, std::ostream& out, std::ostream& err) {
  if (f.data.empty() || f.column.empty()) {
    return Fail(absl::InvalidArgumentError("--data and --column are required"),
                err);
  }
  absl::StatusOr<QueryKind> kind = ParseQueryKind(f.query);
  if (!kind.ok()) return Fail(kind.status(), err);
  Query query{*kind, 0.0, 0.0};
  if (*kind != QueryKind::kCount) {
    if (f.clip.size() != 2) {
      return Fail(absl::InvalidArgumentError(
                      "--clip lo,hi is required for sum and mean"),
                  err);
    }
    query.clip_lo = f.clip[0];
    query.clip_hi = f.clip[1];
  }
  absl::StatusOr<Dataset> data = Dataset::FromCsvFile(f.data, f.column);
  if (!data.ok()) return Fail(data.status(), err);

  QueryJob job;
  job.data = &*data;
  job.query = query;
  job.gamma = f.gamma;
  job.seed = f.seed;
  if (!f.spec.empty()) {
    absl::StatusOr<DistributionSpec> spec = LoadSpecFile(f.spec);
    if (!spec.ok()) return Fail(spec.status(), err);
    job.spec_override = *spec;
    job.eps_target = f.epsilon.value_or(1.0);
  } else {
    if (!f.epsilon.has_value()) {
      return Fail(absl::InvalidArgumentError(
                      "--epsilon is required unless --spec is given"),
                  err);
    }
    job.eps_target = *f.epsilon;
  }
  if (absl::Status s = f.search.Apply(&job.search); !s.ok()) return Fail(s, err);
  job.metric = job.search.metric;
  absl::StatusOr<ReleaseRecord> record = Release(job);
  if (!record.ok()) return Fail(record.status(), err);
  out << ReleaseToJson(*record).dump(2) << "\n";
  return kExitOk;
}

// ---- verify ----

struct VerifyFlags {
  std::string spec;
  bool corpus = false;
  int64_t samples = kConfidentSamples;
  uint64_t seed = 0;
  double sensitivity = 1.0;
  double gamma = 1.0;
};

int RunVerify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
  if (f.spec.empty() == !f.corpus) {
    return Fail(absl::InvalidArgumentError(
                    "exactly one of --spec or --corpus is required"),
                err);
  }
  std::vector<DistributionSpec> specs;
  if (f.corpus) {
    specs = RegressionCorpus();
  } else {
    absl::StatusOr<DistributionSpec> spec = LoadSpecFile(f.spec);
    if (!spec.ok()) return Fail(spec.status(), err);
    specs.push_back(*spec);
  }
  bool passed = true;
  bool low_confidence = false;
  json reports = json::array();
  for (size_t i = 0; i < specs.size(); ++i) {
    absl::StatusOr<VerificationReport> report =
        Verify(specs[i], f.sensitivity, f.gamma, f.samples,
               f.corpus ? MixSeed(f.seed + i) : f.seed);
    if (!report.ok()) return Fail(report.status(), err);
    passed = passed && report->passed;
    low_confidence = low_confidence || report->low_confidence;
    json entry = ToJson(*report);
    entry["spec"] = SpecToJson(specs[i]);
    entry["spec_compact"] = CompactSpecString(specs[i]);
    reports.push_back(std::move(entry));
  }
  if (f.corpus) {
    out << json{{"reports", std::move(reports)}, {"passed", passed}}.dump(2)
        << "\n";
  } else {
    out << reports[0].dump(2) << "\n";
  }
  if (low_confidence) {
    err << "warning: low-confidence empirical privacy estimate; increase "
           "--samples\n";
  }
  if (!passed) {
    err << "verification failed\n";
    return kExitVerification;
  }
  return kExitOk;
}

// ---- sweep ----

struct SweepFlags {
  double eps_min = 0.1;
  double eps_max = 10.0;
  int steps = 20;
  double sensitivity = 1.0;
  double gamma = 1.0;
  uint64_t seed = 0;
  std::string out;
  SearchFlags search;
};

int RunSweepCommand(const SweepFlags& f, std::ostream& out, std::ostream& err) {
  OptimizationProblem problem;
  if (absl::Status s = f.search.Apply(&problem); !s.ok()) return Fail(s, err);
  SweepOptions options;
  options.eps_min = f.eps_min;
  options.eps_max = f.eps_max;
  options.steps = f.steps;
  options.delta_q = f.sensitivity;
  options.gamma = f.gamma;
  options.metric = problem.metric;
  options.families = problem.families;
  options.combined = problem.combined;
  options.restarts = problem.restarts;
  options.seed = f.seed;
  options.bounds = problem.bounds;
  absl::StatusOr<std::vector<SweepRow>> rows = RunSweep(options);
  if (!rows.ok()) return Fail(rows.status(), err);
  absl::Status written = WriteOutput(f.out, SweepCsv(*rows), out);
  return written.ok() ? kExitOk : Fail(written, err);
}

double MetricLoss(const DistributionSpec& spec, Metric metric, double gamma) {
  absl::StatusOr<double> v =
      EvaluateMetric(spec, metric, gamma, kDefaultQuadratureTolerance);
  if (!v.ok()) return std::numeric_limits<double>::infinity();
  return HigherIsBetter(metric) ? -*v : *v;
}

std::string SubcommandName(const std::vector<std::string>& args) {
  for (size_t i = 1; i < args.size(); ++i) {
    for (const char* name : {"analyze", "optimize", "run", "verify", "sweep"}) {
      if (args[i] == name) return name;
    }
  }
  return "";
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kOutOfRange:
      return kExitInput;
    case absl::StatusCode::kFailedPrecondition:
      return kExitInfeasible;
    default:
      return kExitOther;
  }
}

absl::Status ParseFamilies(const std::string& text,
                           std::vector<FamilyKind>* families, bool* combined) {
  families->clear();
  *combined = false;
  if (text == "all") {
    families->assign(std::begin(kAllFamilies), std::end(kAllFamilies));
    return absl::OkStatus();
  }
  if (text == "combined") {
    families->assign(std::begin(kCombinedFamilies),
                     std::end(kCombinedFamilies));
    *combined = true;
    return absl::OkStatus();
  }
  for (absl::string_view name : absl::StrSplit(text, ',')) {
    absl::StatusOr<FamilyKind> kind =
        ParseFamilyKind(std::string_view(name.data(), name.size()));
    if (!kind.ok()) return kind.status();
    if (std::find(families->begin(), families->end(), *kind) ==
        families->end()) {
      families->push_back(*kind);
    }
  }
  if (families->empty()) {
    return absl::InvalidArgumentError("no families selected");
  }
  return absl::OkStatus();
}

absl::Status ApplyBound(const std::string& text, ParameterBounds* bounds) {
  const std::vector<std::string> kv = absl::StrSplit(text, '=');
  const std::vector<std::string> range =
      kv.size() == 2 ? absl::StrSplit(kv[1], ':') : std::vector<std::string>{};
  Interval box{};
  if (range.size() != 2 || !absl::SimpleAtod(range[0], &box.lo) ||
      !absl::SimpleAtod(range[1], &box.hi)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bound '", text, "' must look like name=lo:hi"));
  }
  const std::string& name = kv[0];
  std::pair<const char*, Interval*> named[] = {
      {"degenerate_k0", &bounds->degenerate_k0},
      {"bernoulli_x", &bounds->bernoulli_x},
      {"gamma_k", &bounds->gamma_k},
      {"gamma_theta", &bounds->gamma_theta},
      {"uniform", &bounds->uniform},
      {"trunc_gauss_mu", &bounds->trunc_gauss_mu},
      {"trunc_gauss_sigma", &bounds->trunc_gauss_sigma},
      {"trunc_gauss_bounds", &bounds->trunc_gauss_bounds},
  };
  for (auto& [key, target] : named) {
    if (name == key) {
      *target = box;
      return absl::OkStatus();
    }
  }
  int index = 0;
  if (name.rfind("coef", 0) == 0 &&
      absl::SimpleAtoi(name.substr(4), &index) && index >= 0 && index < 64) {
    if (bounds->coef.size() <= static_cast<size_t>(index)) {
      bounds->coef.resize(index + 1, Interval{0.0, 10.0});
    }
    bounds->coef[index] = box;
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown bound name '", name, "'"));
}

absl::StatusOr<std::vector<SweepRow>> RunSweep(const SweepOptions& o) {
  if (o.steps < 1) return absl::InvalidArgumentError("--steps must be >= 1");
  if (!(o.eps_min > 0.0 && o.eps_max >= o.eps_min)) {
    return absl::InvalidArgumentError("need 0 < eps-min <= eps-max");
  }
  if (o.families.empty()) {
    return absl::InvalidArgumentError("no families selected");
  }
  std::vector<double> grid(o.steps);
  for (int i = 0; i < o.steps; ++i) {
    grid[i] = o.steps == 1 ? o.eps_min
                           : o.eps_min + (o.eps_max - o.eps_min) * i /
                                             (o.steps - 1);
  }
  std::vector<absl::StatusOr<OptimizationResult>> results(
      o.steps, absl::UnknownError("not run"));
  ParallelFor(o.steps, [&](int i) {
    OptimizationProblem p;
    p.eps_target = grid[i];
    p.delta_q = o.delta_q;
    p.gamma = o.gamma;
    p.metric = o.metric;
    p.families = o.families;
    p.combined = o.combined;
    p.restarts = o.restarts;
    p.seed = MixSeed(o.seed + static_cast<uint64_t>(i));
    p.bounds = o.bounds;
    p.threads = 1;
    results[i] = Optimize(p);
  });

  std::vector<SweepRow> rows;
  std::optional<DistributionSpec> previous;
  for (int i = 0; i < o.steps; ++i) {
    if (!results[i].ok()) {
      return absl::Status(results[i].status().code(),
                          absl::StrCat("eps = ", grid[i], ": ",
                                       results[i].status().message()));
    }
    DistributionSpec best = results[i]->best_spec;
    if (previous.has_value()) {
      absl::StatusOr<DistributionSpec> carried =
          RescaleToEpsilon(*previous, grid[i], o.delta_q);
      if (carried.ok() &&
          MetricLoss(*carried, o.metric, o.gamma) <
              MetricLoss(best, o.metric, o.gamma) - kTieTolerance) {
        best = *carried;
      }
    }
    absl::StatusOr<NecessaryCondition> necc =
        CheckNecessaryCondition(best, o.delta_q);
    if (!necc.ok()) return necc.status();
    SweepRow row;
    row.eps = grid[i];
    row.baseline_usefulness = BaselineUsefulness(grid[i], o.gamma, o.delta_q);
    row.optimized_usefulness = Usefulness(best, o.gamma);
    row.best_family_mix = CompactSpecString(best);
    row.necc_holds = necc->holds;
    row.improved = row.optimized_usefulness > row.baseline_usefulness;
    rows.push_back(std::move(row));
    previous = std::move(best);
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = absl::StrCat(kSweepHeader, "\n");
  for (const SweepRow& r : rows) {
    absl::StrAppend(&out,
                    absl::StrFormat("%.10g,%.12g,%.12g,\"%s\",%s\n", r.eps,
                                    r.baseline_usefulness,
                                    r.optimized_usefulness, r.best_family_mix,
                                    r.necc_holds ? "true" : "false"));
  }
  return out;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Compound Laplace mechanism design and release", "rdp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<FlexibleConfig>(SubcommandName(args)));
  app.set_config("--config", "", "TOML/INI or JSON file with default flags");

  AnalyzeFlags analyze;
  CLI::App* cmd_analyze =
      app.add_subcommand("analyze", "privacy and utility report for a spec");
  cmd_analyze->add_option("--spec", analyze.spec, "spec JSON file");
  cmd_analyze->add_option("--sensitivity", analyze.sensitivity)
      ->capture_default_str();
  cmd_analyze->add_option("--gamma", analyze.gamma)->capture_default_str();

  OptimizeFlags optimize;
  CLI::App* cmd_optimize =
      app.add_subcommand("optimize", "search for a utility-maximizing spec");
  cmd_optimize->add_option("--epsilon", optimize.epsilon, "target privacy loss");
  cmd_optimize->add_option("--sensitivity", optimize.sensitivity)
      ->capture_default_str();
  cmd_optimize->add_option("--gamma", optimize.gamma)->capture_default_str();
  cmd_optimize->add_option("--seed", optimize.seed)->envname("RDP_SEED");
  cmd_optimize->add_option("--out", optimize.out, "output file (default stdout)");
  optimize.search.Register(cmd_optimize, 64);

  RunFlags run;
  CLI::App* cmd_run = app.add_subcommand("run", "release a noisy query answer");
  cmd_run->add_option("--data", run.data, "CSV file with a header row");
  cmd_run->add_option("--column", run.column, "column to query");
  cmd_run->add_option("--query", run.query, "count, sum or mean")
      ->capture_default_str();
  cmd_run->add_option("--clip", run.clip, "clip range lo,hi")
      ->expected(2)
      ->delimiter(',');
  cmd_run->add_option("--epsilon", run.epsilon, "target privacy loss");
  cmd_run->add_option("--gamma", run.gamma)->capture_default_str();
  cmd_run->add_option("--seed", run.seed)->envname("RDP_SEED");
  cmd_run->add_option("--spec", run.spec, "use this spec instead of optimizing");
  run.search.Register(cmd_run, 64);

  VerifyFlags verify;
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "numerical and Monte Carlo certification");
  cmd_verify->add_option("--spec", verify.spec, "spec JSON file");
  cmd_verify->add_flag("--corpus", verify.corpus, "use the regression corpus");
  cmd_verify->add_option("--samples", verify.samples)->capture_default_str();
  cmd_verify->add_option("--seed", verify.seed)->envname("RDP_SEED");
  cmd_verify->add_option("--sensitivity", verify.sensitivity)
      ->capture_default_str();
  cmd_verify->add_option("--gamma", verify.gamma)->capture_default_str();

  SweepFlags sweep;
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "optimized vs baseline usefulness over eps");
  cmd_sweep->add_option("--eps-min", sweep.eps_min)->capture_default_str();
  cmd_sweep->add_option("--eps-max", sweep.eps_max)->capture_default_str();
  cmd_sweep->add_option("--steps", sweep.steps)->capture_default_str();
  cmd_sweep->add_option("--sensitivity", sweep.sensitivity)
      ->capture_default_str();
  cmd_sweep->add_option("--gamma", sweep.gamma)->capture_default_str();
  cmd_sweep->add_option("--seed", sweep.seed)->envname("RDP_SEED");
  cmd_sweep->add_option("--out", sweep.out, "output CSV (default stdout)");
  sweep.search.Register(cmd_sweep, 16);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (cmd_analyze->parsed()) return RunAnalyze(analyze, out, err);
  if (cmd_optimize->parsed()) return RunOptimize(optimize, out, err);
  if (cmd_run->parsed()) return RunRelease(run, out, err);
  if (cmd_verify->parsed()) return RunVerify(verify, out, err);
  if (cmd_sweep->parsed()) return RunSweepCommand(sweep, out, err);
  return kExitInput;
}

}  // namespace rdp::cli
