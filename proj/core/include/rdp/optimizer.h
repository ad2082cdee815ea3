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

// Utility-maximizing noise design under an exact privacy constraint.
//
// The constrained problem
//
//   minimize loss(spec)  subject to  EpsGeneral(spec, delta_q) = eps_target
//
// is solved with an exterior quadratic penalty, loss + rho * residual^2, with
// rho raised tenfold from 1e2 to 1e8. Each stage runs a Nelder-Mead simplex in
// the unit cube that parameterizes the search box, warm-started from the
// previous stage. Restarts come from a Latin hypercube. Every restart ends
// with a scale polish: eps(c * X) is strictly increasing in c, so a 1-D root
// find lands exactly on the constraint whenever the rescaled point stays in
// the box.

#ifndef RDP_OPTIMIZER_H_
#define RDP_OPTIMIZER_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rdp/distribution.h"
#include "rdp/privacy.h"

namespace rdp {

enum class Metric { kUsefulness, kL1, kL2, kEntropy };

std::string_view MetricName(Metric metric);
absl::StatusOr<Metric> ParseMetric(std::string_view name);

// Usefulness is maximized; the error metrics and entropy are minimized.
bool HigherIsBetter(Metric metric);

struct Interval {
  double lo;
  double hi;
};

struct ParameterBounds {
  Interval degenerate_k0{1e-4, 1e4};
  Interval bernoulli_x{1e-4, 100.0};
  Interval gamma_k{0.05, 100.0};
  Interval gamma_theta{1e-4, 50.0};
  // Both endpoints a < b of the uniform family lie here.
  Interval uniform{0.0, 100.0};
  Interval trunc_gauss_mu{-10.0, 100.0};
  Interval trunc_gauss_sigma{1e-3, 50.0};
  // Both truncation points lo < hi lie here.
  Interval trunc_gauss_bounds{0.0, 200.0};
  // Coefficient box for each term of a combined search. Terms beyond the
  // vector's length use {0, 10}. An interval of {0, 0} switches a term off.
  std::vector<Interval> coef;
};

inline constexpr double kFeasibilityTolerance = 1e-4;
inline constexpr double kTieTolerance = 1e-9;

struct OptimizationProblem {
  double eps_target = 1.0;
  double delta_q = 1.0;
  double gamma = 1.0;
  Metric metric = Metric::kUsefulness;
  std::vector<FamilyKind> families;
  // Optimize one linear combination of all families instead of each family
  // on its own.
  bool combined = false;
  int restarts = 64;
  uint64_t seed = 0;
  ParameterBounds bounds;
  // Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 0;
};

struct RestartLog {
  std::vector<double> start;
  std::vector<double> end;
  double objective = 0.0;
  double constraint_residual = 0.0;
};

struct OptimizationResult {
  DistributionSpec best_spec;
  Metric metric = Metric::kUsefulness;
  // Metric value at best_spec, in its natural orientation.
  double objective = 0.0;
  double eps_achieved = 0.0;
  double constraint_residual = 0.0;
  // The same metric for the Laplace mechanism with b = delta_q / eps_target.
  double baseline_objective = 0.0;
  bool improved = false;
  NecessaryCondition necessary_condition;
  std::vector<RestartLog> per_restart_log;
};

// Baseline usefulness 1 - exp(-gamma * eps / delta_q).
double BaselineUsefulness(double eps, double gamma, double delta_q = 1.0);

// Metric of the plain Laplace mechanism calibrated to eps.
double BaselineObjective(Metric metric, double eps, double gamma,
                         double delta_q);

// Errors: InvalidArgument for a malformed problem, FailedPrecondition when no
// restart reaches the constraint within kFeasibilityTolerance.
absl::StatusOr<OptimizationResult> OptimizeSingle(
    const OptimizationProblem& problem, FamilyKind kind);
absl::StatusOr<OptimizationResult> OptimizeCombined(
    const OptimizationProblem& problem);

// Dispatches on problem.combined. In single-family mode every listed family
// is optimized and the best feasible result wins.
absl::StatusOr<OptimizationResult> Optimize(const OptimizationProblem& problem);

// Rescales every term so that EpsGeneral(result) = eps_target. Fails if the
// root find cannot bracket the target.
absl::StatusOr<DistributionSpec> RescaleToEpsilon(const DistributionSpec& spec,
                                                  double eps_target,
                                                  double delta_q);

// Metric value of spec in its natural orientation; quadrature metrics use
// abs_tol. OutOfRange when the metric diverges.
absl::StatusOr<double> EvaluateMetric(const DistributionSpec& spec,
                                      Metric metric, double gamma,
                                      double abs_tol);

// Orders two candidates: better loss beyond kTieTolerance, then smaller
// residual, then fewer active terms. Losses are in minimization orientation.
bool PreferCandidate(double loss_a, double residual_a, int active_a,
                     double loss_b, double residual_b, int active_b);

}  // namespace rdp

#endif  // RDP_OPTIMIZER_H_
