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

// Differential-privacy accounting for the compound Laplace mechanism
// q(d) + Lap(b) with 1/b ~ spec.
//
// The exact guarantee is ln(E[1/b] / M'(-dq)), where M is the MGF of 1/b and
// dq the query sensitivity. The average-leakage bound ln E[e^{dq/b}] =
// ln M(dq) is reported alongside; a randomized scale can only beat the plain
// Laplace mechanism when the exact guarantee is strictly below it.

#ifndef RDP_PRIVACY_H_
#define RDP_PRIVACY_H_

#include <optional>

#include "absl/status/statusor.h"
#include "rdp/distribution.h"

namespace rdp {

// ln(E[1/b] / M'(-delta_q)). Fails for non-positive delta_q.
absl::StatusOr<double> EpsGeneral(const DistributionSpec& spec,
                                  double delta_q);

// Per-family closed forms:
//   degenerate   dq k0
//   bernoulli    ln(p e^{dq x0} + (1 - p) e^{dq x1})   (average leakage)
//   gamma        (k + 1) ln(1 + dq theta)
//   uniform      ln[(alpha^2 - beta^2) /
//                   (2((1 + beta) e^{-beta} - (1 + alpha) e^{-alpha}))],
//                alpha = a dq, beta = b dq
//   trunc_gauss  ln[(mu + sigma (phi(alpha) - phi(beta)) /
//                   (Phi(beta) - Phi(alpha))) / M'(-dq)]
// The Bernoulli value is the average-leakage bound, which is not the same
// quantity as EpsGeneral for that family; both are reported.
double EpsClosedForm(const BaseFamily& family, double delta_q);

// Closed form when the spec reduces to a single family, else nullopt.
std::optional<double> EpsClosedForm(const DistributionSpec& spec,
                                    double delta_q);

// ln M(delta_q); +infinity when the MGF does not exist there.
double EpsAverageLeakage(const DistributionSpec& spec, double delta_q);

struct NecessaryCondition {
  // e^eps < M(delta_q), strictly. Equality counts as a failure.
  bool holds = false;
  // M(delta_q) - e^eps; +infinity when the MGF diverges at delta_q.
  double margin = 0.0;
  // The MGF does not exist at +delta_q, so the average-leakage bound is
  // vacuous and the condition holds trivially.
  bool mgf_divergent = false;
};

absl::StatusOr<NecessaryCondition> CheckNecessaryCondition(
    const DistributionSpec& spec, double delta_q);

// Smallest Gamma shape k for which the necessary condition holds with
// theta = theta_ratio / delta_q. Found by bisection on the closed forms.
// Requires delta_q > 0 and theta_ratio in (0, 1).
absl::StatusOr<double> GammaThreshold(double delta_q, double theta_ratio);

struct ImprovementVerdict {
  // 1 - M(-zeta) > 1 - e^{-zeta eps0}, strictly.
  bool improves = false;
  // |ln M(1) - eps0| <= 1e-6, i.e. E[e^eps] = e^{eps0} with 1/b read as eps.
  bool budget_matched = false;
  double usefulness = 0.0;
  double baseline_usefulness = 0.0;
};

// Improvement test for a randomized budget eps = 1/b (unit sensitivity)
// against the fixed budget eps0 at error bound zeta.
ImprovementVerdict ImprovementCriterion(const DistributionSpec& spec,
                                        double eps0, double zeta);

struct PrivacyReport {
  double sensitivity = 0.0;
  double eps_general = 0.0;
  std::optional<double> eps_closed_form;
  double eps_avg_leakage = 0.0;
  NecessaryCondition necessary_condition;
};

absl::StatusOr<PrivacyReport> AnalyzePrivacy(const DistributionSpec& spec,
                                             double delta_q);

}  // namespace rdp

#endif  // RDP_PRIVACY_H_
