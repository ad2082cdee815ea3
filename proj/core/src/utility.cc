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

#include "rdp/utility.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "quadrature.h"

namespace rdp {
namespace {

absl::StatusOr<double> Finish(const internal::HalfLineIntegral& integral,
                              const char* what) {
  if (integral.diverged) {
    return absl::OutOfRangeError(absl::StrCat(what, " integral diverges"));
  }
  return integral.value;
}

double Scale(const DistributionSpec& spec) { return 1.0 / MeanInvB(spec); }

}  // namespace

double NoisePdf(const DistributionSpec& spec, double x) {
  return 0.5 * MgfDerivative(spec, -std::abs(x));
}

double LogNoisePdf(const DistributionSpec& spec, double x) {
  return -std::numbers::ln2 + LogMgfDerivative(spec, -std::abs(x));
}

double NoiseCdf(const DistributionSpec& spec, double x) {
  if (x < 0.0) return 0.5 * Mgf(spec, x);
  return 1.0 - 0.5 * Mgf(spec, -x);
}

double Usefulness(const DistributionSpec& spec, double gamma) {
  return -std::expm1(LogMgf(spec, -gamma));
}

absl::StatusOr<double> ScaleMoment(const DistributionSpec& spec, int order,
                                   double abs_tol) {
  if (order < 1) {
    return absl::InvalidArgumentError("moment order must be >= 1");
  }
  const double factorial = std::tgamma(static_cast<double>(order));
  auto integrand = [&spec, order](double u) {
    const double log_m = LogMgf(spec, -u);
    if (order == 1) return std::exp(log_m);
    if (u == 0.0) return 0.0;
    return std::exp(log_m + (order - 1) * std::log(u));
  };
  internal::HalfLineIntegral integral = internal::IntegrateHalfLine(
      integrand, Scale(spec), abs_tol * factorial);
  absl::StatusOr<double> value = Finish(integral, "scale moment");
  if (!value.ok()) return value.status();
  return *value / factorial;
}

absl::StatusOr<double> L1Error(const DistributionSpec& spec, double abs_tol) {
  auto integrand = [&spec](double x) { return Mgf(spec, -x); };
  return Finish(internal::IntegrateHalfLine(integrand, Scale(spec), abs_tol),
                "l1");
}

absl::StatusOr<double> L2Error(const DistributionSpec& spec, double abs_tol) {
  // int_0^inf int_x^inf M(-u) du dx = int_0^inf u M(-u) du by Fubini; the
  // single integral avoids nesting adaptive quadratures.
  auto integrand = [&spec](double u) { return u * Mgf(spec, -u); };
  absl::StatusOr<double> inner = Finish(
      internal::IntegrateHalfLine(integrand, Scale(spec), abs_tol / 2.0), "l2");
  if (!inner.ok()) return inner.status();
  return std::sqrt(2.0 * *inner);
}

absl::StatusOr<double> EntropyTable(const DistributionSpec& spec,
                                    double abs_tol) {
  auto integrand = [&spec](double x) {
    const double log_d = LogMgfDerivative(spec, -x);
    const double d = std::exp(log_d);
    if (d == 0.0) return 0.0;
    return -d * log_d;
  };
  return Finish(internal::IntegrateHalfLine(integrand, Scale(spec), abs_tol),
                "entropy");
}

absl::StatusOr<UtilityReport> AnalyzeUtility(const DistributionSpec& spec,
                                             double gamma, double abs_tol) {
  if (!(std::isfinite(gamma) && gamma > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must be positive and finite, got ", gamma));
  }
  UtilityReport report;
  report.gamma = gamma;
  report.usefulness = Usefulness(spec, gamma);
  if (absl::StatusOr<double> l1 = L1Error(spec, abs_tol); l1.ok()) {
    report.l1 = *l1;
  }
  if (absl::StatusOr<double> l2 = L2Error(spec, abs_tol); l2.ok()) {
    report.l2 = *l2;
  }
  if (absl::StatusOr<double> h = EntropyTable(spec, abs_tol); h.ok()) {
    report.entropy_table = *h;
    report.entropy_true = *h + std::numbers::ln2;
  }
  return report;
}

}  // namespace rdp
