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

// Utility of the compound Laplace mechanism. The released noise is the scale
// mixture E_b[Lap(b)], whose density, CDF and accuracy metrics are all
// functionals of the MGF M of 1/b evaluated at non-positive arguments:
//
//   density      f(x) = M'(-|x|) / 2
//   CDF          F(x) = M(x) / 2 for x < 0, 1 - M(-x) / 2 otherwise
//   usefulness   P(|noise| <= gamma) = 1 - M(-gamma)
//   l1           int_0^inf M(-x) dx                          = E[b]
//   l2           sqrt(2 int_0^inf int_x^inf M(-u) du dx)     = sqrt(2 E[b^2])
//   entropy      int_0^inf -M'(-x) ln M'(-x) dx
//
// The entropy integral omits the ln 2 of the two-sided density; the
// differential entropy of f is that value plus ln 2 and is reported as
// entropy_true.

#ifndef RDP_UTILITY_H_
#define RDP_UTILITY_H_

#include <optional>

#include "absl/status/statusor.h"
#include "rdp/distribution.h"

namespace rdp {

inline constexpr double kDefaultQuadratureTolerance = 1e-10;

double NoisePdf(const DistributionSpec& spec, double x);
double LogNoisePdf(const DistributionSpec& spec, double x);
double NoiseCdf(const DistributionSpec& spec, double x);

// 1 - M(-gamma). Requires gamma > 0.
double Usefulness(const DistributionSpec& spec, double gamma);

// E[b^order] = int_0^inf u^{order-1} M(-u) du / (order - 1)!.
// OutOfRange when the integral diverges.
absl::StatusOr<double> ScaleMoment(
    const DistributionSpec& spec, int order,
    double abs_tol = kDefaultQuadratureTolerance);

absl::StatusOr<double> L1Error(const DistributionSpec& spec,
                               double abs_tol = kDefaultQuadratureTolerance);
absl::StatusOr<double> L2Error(const DistributionSpec& spec,
                               double abs_tol = kDefaultQuadratureTolerance);
absl::StatusOr<double> EntropyTable(
    const DistributionSpec& spec, double abs_tol = kDefaultQuadratureTolerance);

struct UtilityReport {
  double gamma = 0.0;
  double usefulness = 0.0;
  // nullopt where the defining integral diverges.
  std::optional<double> l1;
  std::optional<double> l2;
  std::optional<double> entropy_table;
  std::optional<double> entropy_true;
};

absl::StatusOr<UtilityReport> AnalyzeUtility(
    const DistributionSpec& spec, double gamma,
    double abs_tol = kDefaultQuadratureTolerance);

}  // namespace rdp

#endif  // RDP_UTILITY_H_
