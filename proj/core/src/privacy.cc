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

#include "rdp/privacy.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "absl/strings/str_cat.h"
#include "rdp/gaussian.h"

namespace rdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckSensitivity(double delta_q) {
  if (!(std::isfinite(delta_q) && delta_q > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive and finite, got ", delta_q));
  }
  return absl::OkStatus();
}

double UniformClosedForm(const Uniform& u, double delta_q) {
  const double alpha = u.a * delta_q;
  const double beta = u.b * delta_q;
  // (1 + alpha) e^{-alpha} - (1 + beta) e^{-beta}, in logs.
  const double log_denominator =
      std::log1p(alpha) - alpha +
      std::log1p(-std::exp(std::log1p(beta) - std::log1p(alpha) -
                           (beta - alpha)));
  return std::log((beta - alpha) * (beta + alpha)) - std::numbers::ln2 -
         log_denominator;
}

// Phi(b) - Phi(a) from whichever tail avoids cancellation.
double PhiDifference(double a, double b) {
  if (a >= 0.0) return UpperTail(a) - UpperTail(b);
  if (b <= 0.0) return UpperTail(-b) - UpperTail(-a);
  return 1.0 - UpperTail(b) - UpperTail(-a);
}

// The truncated-Gaussian guarantee written out directly from the textbook
// MGF; independent of the log-domain route used by EpsGeneral.
double TruncGaussClosedForm(const TruncGauss& g, double delta_q) {
  const double alpha = (g.lo - g.mu) / g.sigma;
  const double beta = std::isinf(g.hi) ? kInf : (g.hi - g.mu) / g.sigma;
  const double pdf_alpha = NormalPdf(alpha);
  const double pdf_beta = std::isinf(beta) ? 0.0 : NormalPdf(beta);
  const double mass = PhiDifference(alpha, beta);
  const double mean = g.mu + g.sigma * (pdf_alpha - pdf_beta) / mass;

  const double t = -delta_q;
  const double a_t = alpha - g.sigma * t;
  const double b_t = beta - g.sigma * t;
  const double pdf_b_t = std::isinf(b_t) ? 0.0 : NormalPdf(b_t);
  const double derivative =
      std::exp(g.mu * t + 0.5 * g.sigma * g.sigma * t * t) *
      ((g.mu + g.sigma * g.sigma * t) * PhiDifference(a_t, b_t) +
       g.sigma * (NormalPdf(a_t) - pdf_b_t)) /
      mass;
  return std::log(mean / derivative);
}

}  // namespace

absl::StatusOr<double> EpsGeneral(const DistributionSpec& spec,
                                  double delta_q) {
  if (absl::Status s = CheckSensitivity(delta_q); !s.ok()) return s;
  const double t = -delta_q;
  // ln E[1/b] - ln M'(t) with ln M'(t) = ln M(t) + ln sum_j a_j m_j(a_j t).
  // The two weighted sums are differenced first so that a point mass gives
  // exactly dq k0.
  double mean = 0.0;
  double tilted = 0.0;
  for (const Term& term : spec.terms()) {
    if (term.coef == 0.0) continue;
    mean += term.coef * FamilyMean(term.family);
    tilted += term.coef * FamilyTiltedMean(term.family, term.coef * t);
  }
  if (!(tilted > 0.0) || !std::isfinite(tilted)) {
    return absl::OutOfRangeError(
        "MGF derivative at -sensitivity is not positive; spec is corrupted");
  }
  return (std::log(mean) - std::log(tilted)) - LogMgf(spec, t);
}

double EpsClosedForm(const BaseFamily& family, double delta_q) {
  struct Visitor {
    double delta_q;
    double operator()(const Degenerate& d) const { return delta_q * d.k0; }
    double operator()(const Bernoulli& b) const {
      if (b.p == 1.0) return delta_q * b.x0;
      if (b.p == 0.0) return delta_q * b.x1;
      const double l0 = std::log(b.p) + delta_q * b.x0;
      const double l1 = std::log1p(-b.p) + delta_q * b.x1;
      const double m = std::max(l0, l1);
      return m + std::log(std::exp(l0 - m) + std::exp(l1 - m));
    }
    double operator()(const Gamma& g) const {
      return (g.k + 1.0) * std::log1p(delta_q * g.theta);
    }
    double operator()(const Uniform& u) const {
      return UniformClosedForm(u, delta_q);
    }
    double operator()(const TruncGauss& g) const {
      return TruncGaussClosedForm(g, delta_q);
    }
  };
  return std::visit(Visitor{delta_q}, family);
}

std::optional<double> EpsClosedForm(const DistributionSpec& spec,
                                    double delta_q) {
  std::optional<BaseFamily> family = spec.AsSingleFamily();
  if (!family.has_value()) return std::nullopt;
  return EpsClosedForm(*family, delta_q);
}

double EpsAverageLeakage(const DistributionSpec& spec, double delta_q) {
  return LogMgf(spec, delta_q);
}

absl::StatusOr<NecessaryCondition> CheckNecessaryCondition(
    const DistributionSpec& spec, double delta_q) {
  absl::StatusOr<double> eps = EpsGeneral(spec, delta_q);
  if (!eps.ok()) return eps.status();
  const double log_m = LogMgf(spec, delta_q);
  NecessaryCondition result;
  if (log_m == kInf) {
    result.holds = true;
    result.margin = kInf;
    result.mgf_divergent = true;
    return result;
  }
  result.holds = *eps < log_m;
  result.margin = std::exp(log_m) - std::exp(*eps);
  return result;
}

absl::StatusOr<double> GammaThreshold(double delta_q, double theta_ratio) {
  if (absl::Status s = CheckSensitivity(delta_q); !s.ok()) return s;
  if (!(theta_ratio > 0.0 && theta_ratio < 1.0)) {
    return absl::InvalidArgumentError("theta_ratio must lie in (0, 1)");
  }
  const double theta = theta_ratio / delta_q;
  auto holds = [&](double k) {
    const Gamma family{k, theta};
    return EpsClosedForm(family, delta_q) < FamilyLogMgf(family, delta_q);
  };
  double lo = 0.0;
  double hi = 1.0;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) {
      return absl::OutOfRangeError("no Gamma shape satisfies the condition");
    }
  }
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

ImprovementVerdict ImprovementCriterion(const DistributionSpec& spec,
                                        double eps0, double zeta) {
  ImprovementVerdict verdict;
  verdict.usefulness = -std::expm1(LogMgf(spec, -zeta));
  verdict.baseline_usefulness = -std::expm1(-zeta * eps0);
  verdict.improves = verdict.usefulness > verdict.baseline_usefulness;
  verdict.budget_matched = std::abs(LogMgf(spec, 1.0) - eps0) <= 1e-6;
  return verdict;
}

absl::StatusOr<PrivacyReport> AnalyzePrivacy(const DistributionSpec& spec,
                                             double delta_q) {
  absl::StatusOr<double> eps = EpsGeneral(spec, delta_q);
  if (!eps.ok()) return eps.status();
  absl::StatusOr<NecessaryCondition> necessary =
      CheckNecessaryCondition(spec, delta_q);
  if (!necessary.ok()) return necessary.status();
  PrivacyReport report;
  report.sensitivity = delta_q;
  report.eps_general = *eps;
  report.eps_closed_form = EpsClosedForm(spec, delta_q);
  report.eps_avg_leakage = EpsAverageLeakage(spec, delta_q);
  report.necessary_condition = *necessary;
  return report;
}

}  // namespace rdp
