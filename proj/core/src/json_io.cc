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

#include "rdp/json_io.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace rdp {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json Num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json OptNum(const std::optional<double>& v) {
  return v.has_value() ? Num(*v) : json(nullptr);
}

absl::Status PathError(const std::string& path, std::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(path, ": ", std::string(what)));
}

// Reads the listed numeric fields of a family object, rejecting unknown or
// missing keys. `inf_ok` names a field that may be the string "inf".
absl::StatusOr<std::vector<double>> ReadFields(
    const json& obj, const std::string& path,
    const std::vector<std::string>& names, const std::string& inf_ok = "") {
  if (!obj.is_object()) return PathError(path, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      return PathError(absl::StrCat(path, ".", key), "unknown field");
    }
  }
  std::vector<double> out;
  for (const std::string& name : names) {
    const std::string field = absl::StrCat(path, ".", name);
    auto it = obj.find(name);
    if (it == obj.end()) return PathError(field, "missing");
    if (!inf_ok.empty() && name == inf_ok && it->is_string() &&
        it->get<std::string>() == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    if (!it->is_number()) return PathError(field, "must be a number");
    out.push_back(it->get<double>());
  }
  return out;
}

absl::StatusOr<BaseFamily> FamilyFromJson(const json& obj,
                                          const std::string& path) {
  if (!obj.is_object() || obj.size() != 1) {
    return PathError(path, "must be an object with exactly one family key");
  }
  const std::string name = obj.begin().key();
  const json& params = obj.begin().value();
  const std::string sub = absl::StrCat(path, ".", name);
  absl::StatusOr<FamilyKind> kind = ParseFamilyKind(name);
  if (!kind.ok()) return PathError(sub, "unknown family");
  absl::StatusOr<std::vector<double>> v;
  BaseFamily family;
  switch (*kind) {
    case FamilyKind::kDegenerate:
      v = ReadFields(params, sub, {"k0"});
      if (v.ok()) family = Degenerate{(*v)[0]};
      break;
    case FamilyKind::kBernoulli:
      v = ReadFields(params, sub, {"p", "x0", "x1"});
      if (v.ok()) family = Bernoulli{(*v)[0], (*v)[1], (*v)[2]};
      break;
    case FamilyKind::kGamma:
      v = ReadFields(params, sub, {"k", "theta"});
      if (v.ok()) family = Gamma{(*v)[0], (*v)[1]};
      break;
    case FamilyKind::kUniform:
      v = ReadFields(params, sub, {"a", "b"});
      if (v.ok()) family = Uniform{(*v)[0], (*v)[1]};
      break;
    case FamilyKind::kTruncGauss:
      v = ReadFields(params, sub, {"mu", "sigma", "lo", "hi"}, "hi");
      if (v.ok()) family = TruncGauss{(*v)[0], (*v)[1], (*v)[2], (*v)[3]};
      break;
  }
  if (!v.ok()) return v.status();
  if (absl::Status s = ValidateFamily(family); !s.ok()) {
    return PathError(path, std::string(s.message()));
  }
  return family;
}

json FamilyToJson(const BaseFamily& family) {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) {
            return json{{"degenerate", {{"k0", d.k0}}}};
          },
          [](const Bernoulli& b) {
            return json{{"bernoulli", {{"p", b.p}, {"x0", b.x0}, {"x1", b.x1}}}};
          },
          [](const Gamma& g) {
            return json{{"gamma", {{"k", g.k}, {"theta", g.theta}}}};
          },
          [](const Uniform& u) {
            return json{{"uniform", {{"a", u.a}, {"b", u.b}}}};
          },
          [](const TruncGauss& g) {
            return json{{"trunc_gauss",
                         {{"mu", g.mu},
                          {"sigma", g.sigma},
                          {"lo", g.lo},
                          {"hi", Num(g.hi)}}}};
          },
      },
      family);
}

std::string FamilyCompact(const BaseFamily& family) {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) {
            return absl::StrFormat("degenerate(k0=%.6g)", d.k0);
          },
          [](const Bernoulli& b) {
            return absl::StrFormat("bernoulli(p=%.6g,x0=%.6g,x1=%.6g)", b.p,
                                   b.x0, b.x1);
          },
          [](const Gamma& g) {
            return absl::StrFormat("gamma(k=%.6g,theta=%.6g)", g.k, g.theta);
          },
          [](const Uniform& u) {
            return absl::StrFormat("uniform(a=%.6g,b=%.6g)", u.a, u.b);
          },
          [](const TruncGauss& g) {
            return absl::StrFormat(
                "trunc_gauss(mu=%.6g,sigma=%.6g,lo=%.6g,hi=%.6g)", g.mu,
                g.sigma, g.lo, g.hi);
          },
      },
      family);
}

json NecessaryToJson(const NecessaryCondition& n) {
  return {{"holds", n.holds},
          {"margin", Num(n.margin)},
          {"mgf_divergent", n.mgf_divergent}};
}

}  // namespace

json SpecToJson(const DistributionSpec& spec) {
  json terms = json::array();
  for (const Term& term : spec.terms()) {
    terms.push_back({{"coef", term.coef}, {"family", FamilyToJson(term.family)}});
  }
  return {{"terms", std::move(terms)}};
}

absl::StatusOr<DistributionSpec> SpecFromJson(const json& root) {
  if (!root.is_object()) return PathError("$", "spec must be a JSON object");
  if (!root.contains("terms")) {
    absl::StatusOr<BaseFamily> family = FamilyFromJson(root, "$");
    if (!family.ok()) return family.status();
    return DistributionSpec::Of(*family);
  }
  for (const auto& [key, value] : root.items()) {
    if (key != "terms") return PathError(key, "unknown field");
  }
  const json& list = root["terms"];
  if (!list.is_array()) return PathError("terms", "must be an array");
  if (list.empty()) return PathError("terms", "must not be empty");
  std::vector<Term> terms;
  for (size_t i = 0; i < list.size(); ++i) {
    const std::string path = absl::StrCat("terms[", i, "]");
    const json& item = list[i];
    if (!item.is_object()) return PathError(path, "must be an object");
    for (const auto& [key, value] : item.items()) {
      if (key != "coef" && key != "family") {
        return PathError(absl::StrCat(path, ".", key), "unknown field");
      }
    }
    double coef = 1.0;
    if (auto it = item.find("coef"); it != item.end()) {
      if (!it->is_number()) {
        return PathError(absl::StrCat(path, ".coef"), "must be a number");
      }
      coef = it->get<double>();
    }
    auto fam = item.find("family");
    if (fam == item.end()) {
      return PathError(absl::StrCat(path, ".family"), "missing");
    }
    absl::StatusOr<BaseFamily> family =
        FamilyFromJson(*fam, absl::StrCat(path, ".family"));
    if (!family.ok()) return family.status();
    terms.push_back({coef, *family});
  }
  return DistributionSpec::Create(std::move(terms));
}

absl::StatusOr<DistributionSpec> ParseSpec(std::string_view text) {
  json root = json::parse(text.begin(), text.end(), nullptr,
                          /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("spec is not valid JSON");
  }
  return SpecFromJson(root);
}

absl::StatusOr<DistributionSpec> LoadSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseSpec(buffer.str());
}

std::string CompactSpecString(const DistributionSpec& spec) {
  std::string out;
  for (const Term& term : spec.terms()) {
    if (!out.empty()) out += "+";
    absl::StrAppend(&out, absl::StrFormat("%.6g", term.coef), "*",
                    FamilyCompact(term.family));
  }
  return out;
}

json ToJson(const PrivacyReport& r) {
  return {{"sensitivity", Num(r.sensitivity)},
          {"eps_general", Num(r.eps_general)},
          {"eps_closed_form", OptNum(r.eps_closed_form)},
          {"eps_avg_leakage", Num(r.eps_avg_leakage)},
          {"necessary_condition", NecessaryToJson(r.necessary_condition)}};
}

json ToJson(const UtilityReport& r) {
  return {{"gamma", Num(r.gamma)},
          {"usefulness", Num(r.usefulness)},
          {"l1", OptNum(r.l1)},
          {"l2", OptNum(r.l2)},
          {"entropy_table", OptNum(r.entropy_table)},
          {"entropy_true", OptNum(r.entropy_true)}};
}

json ToJson(const OptimizationResult& r) {
  json log = json::array();
  for (const RestartLog& entry : r.per_restart_log) {
    log.push_back({{"start", entry.start},
                   {"end", entry.end},
                   {"objective", Num(entry.objective)},
                   {"constraint_residual", Num(entry.constraint_residual)}});
  }
  return {{"best_spec", SpecToJson(r.best_spec)},
          {"best_spec_compact", CompactSpecString(r.best_spec)},
          {"metric", std::string(MetricName(r.metric))},
          {"objective", Num(r.objective)},
          {"eps_achieved", Num(r.eps_achieved)},
          {"constraint_residual", Num(r.constraint_residual)},
          {"baseline_objective", Num(r.baseline_objective)},
          {"improved", r.improved},
          {"necessary_condition", NecessaryToJson(r.necessary_condition)},
          {"per_restart_log", std::move(log)}};
}

json ToJson(const MetricCheck& c) {
  json out = {{"name", c.name},
              {"analytic", Num(c.analytic)},
              {"oracle", Num(c.oracle)},
              {"stderr", Num(c.std_error)},
              {"tolerance", Num(c.tolerance)},
              {"pass", c.pass},
              {"enforced", c.enforced}};
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

json ToJson(const VerificationReport& r) {
  json checks = json::array();
  for (const MetricCheck& c : r.metric_checks) checks.push_back(ToJson(c));
  return {{"delta_q", Num(r.delta_q)},
          {"gamma", Num(r.gamma)},
          {"n_samples", r.n_samples},
          {"eps_analytic", Num(r.eps_analytic)},
          {"eps_density_sup", Num(r.eps_density_sup)},
          {"eps_density_argmax", Num(r.eps_density_argmax)},
          {"eps_empirical", Num(r.eps_empirical)},
          {"eps_empirical_stderr", Num(r.eps_empirical_stderr)},
          {"low_confidence", r.low_confidence},
          {"usefulness_analytic", Num(r.usefulness_analytic)},
          {"usefulness_empirical", Num(r.usefulness_empirical)},
          {"usefulness_stderr", Num(r.usefulness_stderr)},
          {"metric_checks", std::move(checks)},
          {"passed", r.passed}};
}

json ReleaseToJson(const ReleaseRecord& r) {
  return {{"noisy_value", Num(r.noisy_value)},
          {"eps_certified", Num(r.eps_certified)},
          {"spec_used", SpecToJson(r.spec_used)},
          {"seed", r.seed}};
}

}  // namespace rdp
