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

#include "rdp/optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "rdp/random.h"
#include "rdp/utility.h"

namespace rdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInnerQuadratureTolerance = 1e-8;
constexpr double kFirstPenalty = 1e2;
constexpr double kLastPenalty = 1e8;
constexpr Interval kDefaultCoef{0.0, 10.0};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Point = std::vector<double>;

double Lerp(const Interval& box, double z) {
  return box.lo + z * (box.hi - box.lo);
}

double LogLerp(const Interval& box, double z) {
  return std::exp(std::log(box.lo) + z * (std::log(box.hi) - std::log(box.lo)));
}

bool Within(const Interval& box, double v) {
  const double slack = 1e-12 * std::max({1.0, std::abs(box.lo),
                                         std::abs(box.hi)});
  return v >= box.lo - slack && v <= box.hi + slack;
}

int Dimension(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kDegenerate:
      return 1;
    case FamilyKind::kBernoulli:
      return 3;
    case FamilyKind::kGamma:
    case FamilyKind::kUniform:
      return 2;
    case FamilyKind::kTruncGauss:
      return 4;
  }
  return 0;
}

std::optional<BaseFamily> DecodeFamily(FamilyKind kind,
                                       const ParameterBounds& bounds,
                                       const double* z) {
  switch (kind) {
    case FamilyKind::kDegenerate:
      return Degenerate{LogLerp(bounds.degenerate_k0, z[0])};
    case FamilyKind::kBernoulli:
      return Bernoulli{z[0], LogLerp(bounds.bernoulli_x, z[1]),
                       LogLerp(bounds.bernoulli_x, z[2])};
    case FamilyKind::kGamma:
      return Gamma{LogLerp(bounds.gamma_k, z[0]),
                   LogLerp(bounds.gamma_theta, z[1])};
    case FamilyKind::kUniform: {
      const double a = Lerp(bounds.uniform, z[0]);
      const double b = a + z[1] * (bounds.uniform.hi - a);
      if (!(b > a)) return std::nullopt;
      return Uniform{a, b};
    }
    case FamilyKind::kTruncGauss: {
      const Interval& tb = bounds.trunc_gauss_bounds;
      const double lo = Lerp(tb, z[2]);
      const double hi = lo + z[3] * (tb.hi - lo);
      if (!(hi > lo)) return std::nullopt;
      return TruncGauss{Lerp(bounds.trunc_gauss_mu, z[0]),
                        LogLerp(bounds.trunc_gauss_sigma, z[1]), lo, hi};
    }
  }
  return std::nullopt;
}

bool FamilyInBox(const BaseFamily& family, const ParameterBounds& bounds) {
  return std::visit(
      Overloaded{
          [&](const Degenerate& d) {
            return Within(bounds.degenerate_k0, d.k0);
          },
          [&](const Bernoulli& b) {
            return Within(bounds.bernoulli_x, b.x0) &&
                   Within(bounds.bernoulli_x, b.x1);
          },
          [&](const Gamma& g) {
            return Within(bounds.gamma_k, g.k) &&
                   Within(bounds.gamma_theta, g.theta);
          },
          [&](const Uniform& u) {
            return Within(bounds.uniform, u.a) && Within(bounds.uniform, u.b);
          },
          [&](const TruncGauss& g) {
            return Within(bounds.trunc_gauss_mu, g.mu) &&
                   Within(bounds.trunc_gauss_sigma, g.sigma) &&
                   Within(bounds.trunc_gauss_bounds, g.lo) &&
                   Within(bounds.trunc_gauss_bounds, g.hi);
          },
      },
      family);
}

void AppendParameters(const BaseFamily& family, Point& out) {
  std::visit(Overloaded{
                 [&](const Degenerate& d) { out.push_back(d.k0); },
                 [&](const Bernoulli& b) {
                   out.insert(out.end(), {b.p, b.x0, b.x1});
                 },
                 [&](const Gamma& g) { out.insert(out.end(), {g.k, g.theta}); },
                 [&](const Uniform& u) { out.insert(out.end(), {u.a, u.b}); },
                 [&](const TruncGauss& g) {
                   out.insert(out.end(), {g.mu, g.sigma, g.lo, g.hi});
                 },
             },
             family);
}

// Maps the unit cube onto specs of a fixed shape: either one family with
// coefficient 1, or a linear combination whose coefficients lead the vector.
class SearchSpace {
 public:
  SearchSpace(std::vector<FamilyKind> kinds, bool combined,
              ParameterBounds bounds)
      : kinds_(std::move(kinds)), combined_(combined),
        bounds_(std::move(bounds)) {
    dimension_ = combined_ ? static_cast<int>(kinds_.size()) : 0;
    for (FamilyKind kind : kinds_) dimension_ += Dimension(kind);
  }

  int dimension() const { return dimension_; }

  Interval CoefBox(size_t i) const {
    return i < bounds_.coef.size() ? bounds_.coef[i] : kDefaultCoef;
  }

  std::optional<DistributionSpec> Decode(const Point& z) const {
    std::vector<Term> terms;
    size_t offset = combined_ ? kinds_.size() : 0;
    for (size_t i = 0; i < kinds_.size(); ++i) {
      std::optional<BaseFamily> family =
          DecodeFamily(kinds_[i], bounds_, z.data() + offset);
      if (!family.has_value()) return std::nullopt;
      offset += Dimension(kinds_[i]);
      const double coef = combined_ ? Lerp(CoefBox(i), z[i]) : 1.0;
      terms.push_back({coef, *family});
    }
    absl::StatusOr<DistributionSpec> spec =
        DistributionSpec::Create(std::move(terms));
    if (!spec.ok()) return std::nullopt;
    return *std::move(spec);
  }

  bool InBox(const DistributionSpec& spec) const {
    const std::vector<Term>& terms = spec.terms();
    for (size_t i = 0; i < terms.size(); ++i) {
      if (combined_ && !Within(CoefBox(i), terms[i].coef)) return false;
      if (!combined_ && terms[i].coef != 1.0) return false;
      if (!FamilyInBox(terms[i].family, bounds_)) return false;
    }
    return true;
  }

  Point Parameters(const DistributionSpec& spec) const {
    Point out;
    if (combined_) {
      for (const Term& term : spec.terms()) out.push_back(term.coef);
    }
    for (const Term& term : spec.terms()) AppendParameters(term.family, out);
    return out;
  }

  bool combined() const { return combined_; }

 private:
  std::vector<FamilyKind> kinds_;
  bool combined_;
  ParameterBounds bounds_;
  int dimension_ = 0;
};

struct Evaluation {
  double loss = kInf;
  double eps = kInf;
};

double Loss(const DistributionSpec& spec, Metric metric, double gamma,
            double abs_tol) {
  if (metric == Metric::kUsefulness) return Mgf(spec, -gamma);
  absl::StatusOr<double> value = EvaluateMetric(spec, metric, gamma, abs_tol);
  return value.ok() ? *value : kInf;
}

Evaluation Evaluate(const DistributionSpec& spec,
                    const OptimizationProblem& problem, double abs_tol) {
  Evaluation out;
  absl::StatusOr<double> eps = EpsGeneral(spec, problem.delta_q);
  if (!eps.ok() || !std::isfinite(*eps)) return out;
  out.eps = *eps;
  out.loss = Loss(spec, problem.metric, problem.gamma, abs_tol);
  if (std::isnan(out.loss)) out.loss = kInf;
  return out;
}

struct Simplex {
  Point x;
  double f;
};

// Nelder-Mead with dimension-adaptive coefficients; vertices are clamped to
// the unit cube.
Simplex NelderMead(const std::function<double(const Point&)>& f, Point x0,
                   double step, int max_evals) {
  const size_t n = x0.size();
  const double nd = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / nd;
  const double gamma = 0.75 - 0.5 / nd;
  const double delta = 1.0 - 1.0 / nd;
  auto clamp = [](Point& p) {
    for (double& v : p) v = std::clamp(v, 0.0, 1.0);
  };
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };

  std::vector<Simplex> s;
  s.reserve(n + 1);
  clamp(x0);
  s.push_back({x0, eval(x0)});
  for (size_t i = 0; i < n; ++i) {
    Point p = x0;
    p[i] = p[i] + step <= 1.0 ? p[i] + step : p[i] - step;
    clamp(p);
    s.push_back({p, eval(p)});
  }
  auto by_value = [](const Simplex& a, const Simplex& b) { return a.f < b.f; };

  while (evals < max_evals) {
    std::stable_sort(s.begin(), s.end(), by_value);
    double diameter = 0.0;
    for (size_t i = 1; i <= n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(s[i].x[j] - s[0].x[j]));
      }
    }
    const double spread = s[n].f - s[0].f;
    if (diameter < 1e-12 ||
        (diameter < 1e-8 && spread <= 1e-14 * (1.0 + std::abs(s[0].f)))) {
      break;
    }

    Point centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) centroid[j] += s[i].x[j] / nd;
    }
    auto along = [&](double t) {
      Point p(n);
      for (size_t j = 0; j < n; ++j) {
        p[j] = centroid[j] + t * (s[n].x[j] - centroid[j]);
      }
      clamp(p);
      return p;
    };

    Point xr = along(-alpha);
    const double fr = eval(xr);
    if (fr < s[0].f) {
      Point xe = along(-alpha * beta);
      const double fe = eval(xe);
      s[n] = fe < fr ? Simplex{std::move(xe), fe} : Simplex{std::move(xr), fr};
      continue;
    }
    if (fr < s[n - 1].f) {
      s[n] = {std::move(xr), fr};
      continue;
    }
    const bool outside = fr < s[n].f;
    Point xc = along(outside ? -alpha * gamma : gamma);
    const double fc = eval(xc);
    if (fc < (outside ? fr : s[n].f)) {
      s[n] = {std::move(xc), fc};
      continue;
    }
    for (size_t i = 1; i <= n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        s[i].x[j] = s[0].x[j] + delta * (s[i].x[j] - s[0].x[j]);
      }
      s[i].f = eval(s[i].x);
    }
  }
  return *std::min_element(s.begin(), s.end(), by_value);
}

std::vector<Point> LatinHypercube(int count, int dimension, uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> points(count, Point(dimension));
  std::vector<int> perm(count);
  for (int d = 0; d < dimension; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = count - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.Uniform() * (i + 1));
      std::swap(perm[i], perm[std::min(j, i)]);
    }
    for (int i = 0; i < count; ++i) {
      points[i][d] = (perm[i] + rng.Uniform()) / count;
    }
  }
  return points;
}

struct Candidate {
  std::optional<DistributionSpec> spec;
  double loss = kInf;
  double residual = kInf;
  RestartLog log;
};

DistributionSpec ScaleSpec(const DistributionSpec& spec, double c,
                           bool scale_coefficients) {
  std::vector<Term> terms = spec.terms();
  for (Term& term : terms) {
    if (scale_coefficients) {
      term.coef *= c;
    } else {
      term.family = ScaleFamily(term.family, c);
    }
  }
  return *DistributionSpec::Create(std::move(terms));
}

absl::StatusOr<double> RescaleFactor(const DistributionSpec& spec,
                                     double eps_target, double delta_q) {
  // eps(c X, dq) = eps(X, c dq).
  auto gap = [&](double log_c) {
    absl::StatusOr<double> eps = EpsGeneral(spec, delta_q * std::exp(log_c));
    if (!eps.ok()) return std::numeric_limits<double>::quiet_NaN();
    return *eps - eps_target;
  };
  double lo = 0.0;
  double hi = 0.0;
  double g_lo = gap(0.0);
  if (std::isnan(g_lo)) {
    return absl::InternalError("privacy loss not computable at c = 1");
  }
  if (g_lo == 0.0) return 1.0;
  double g_hi = g_lo;
  const double direction = g_lo < 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < 200 && (g_lo < 0.0) == (g_hi < 0.0); ++i) {
    lo = hi;
    g_lo = g_hi;
    hi += direction;
    g_hi = gap(hi);
    if (std::isnan(g_hi)) {
      return absl::OutOfRangeError("cannot bracket the privacy target");
    }
  }
  if ((g_lo < 0.0) == (g_hi < 0.0)) {
    return absl::OutOfRangeError("cannot bracket the privacy target");
  }
  if (g_hi == 0.0) return std::exp(hi);
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(g_lo, g_hi);
  }
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      gap, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(52),
      iterations);
  const double root = std::abs(gap(a)) <= std::abs(gap(b)) ? a : b;
  return std::exp(root);
}

Candidate Finish(const SearchSpace& space, const OptimizationProblem& problem,
                 const Point& start, const Point& end) {
  Candidate out;
  std::optional<DistributionSpec> spec = space.Decode(end);
  if (!spec.has_value()) return out;
  // Exact feasibility by rescaling, kept only if it stays in the box.
  absl::StatusOr<double> c =
      RescaleFactor(*spec, problem.eps_target, problem.delta_q);
  if (c.ok()) {
    for (bool coefficients : {true, false}) {
      if (coefficients && !space.combined()) continue;
      DistributionSpec scaled = ScaleSpec(*spec, *c, coefficients);
      if (space.InBox(scaled)) {
        spec = std::move(scaled);
        break;
      }
    }
  }
  const Evaluation eval = Evaluate(*spec, problem, kInnerQuadratureTolerance);
  out.loss = eval.loss;
  out.residual = std::abs(eval.eps - problem.eps_target);
  if (std::optional<DistributionSpec> s = space.Decode(start); s.has_value()) {
    out.log.start = space.Parameters(*s);
  }
  out.log.end = space.Parameters(*spec);
  out.log.constraint_residual = out.residual;
  out.spec = std::move(spec);
  return out;
}

Candidate RunRestart(const SearchSpace& space,
                     const OptimizationProblem& problem, const Point& start) {
  const int n = space.dimension();
  Point z = start;
  double rho = kFirstPenalty;
  bool first = true;
  while (rho <= kLastPenalty * 1.0000001) {
    auto penalized = [&](const Point& p) {
      std::optional<DistributionSpec> spec = space.Decode(p);
      if (!spec.has_value()) return kInf;
      const Evaluation eval =
          Evaluate(*spec, problem, kInnerQuadratureTolerance);
      const double r = eval.eps - problem.eps_target;
      const double value = eval.loss + rho * r * r;
      return std::isnan(value) ? kInf : value;
    };
    z = NelderMead(penalized, z, first ? 0.15 : 0.03, 150 * (n + 1)).x;
    first = false;
    rho *= 10.0;
  }
  return Finish(space, problem, start, z);
}

absl::Status ValidateInterval(const Interval& box, const char* name,
                              bool positive) {
  if (!(std::isfinite(box.lo) && std::isfinite(box.hi) && box.lo <= box.hi) ||
      (positive && !(box.lo > 0.0))) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid search box for ", name));
  }
  return absl::OkStatus();
}

absl::Status ValidateProblem(const OptimizationProblem& p) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(p.eps_target)) {
    return absl::InvalidArgumentError("eps_target must be positive");
  }
  if (!positive(p.delta_q)) {
    return absl::InvalidArgumentError("delta_q must be positive");
  }
  if (!positive(p.gamma)) {
    return absl::InvalidArgumentError("gamma must be positive");
  }
  if (p.restarts < 1) {
    return absl::InvalidArgumentError("restarts must be at least 1");
  }
  if (p.families.empty()) {
    return absl::InvalidArgumentError("at least one family is required");
  }
  const ParameterBounds& b = p.bounds;
  for (const auto& [box, name, pos] :
       {std::tuple{b.degenerate_k0, "degenerate.k0", true},
        std::tuple{b.bernoulli_x, "bernoulli.x", true},
        std::tuple{b.gamma_k, "gamma.k", true},
        std::tuple{b.gamma_theta, "gamma.theta", true},
        std::tuple{b.uniform, "uniform", false},
        std::tuple{b.trunc_gauss_mu, "trunc_gauss.mu", false},
        std::tuple{b.trunc_gauss_sigma, "trunc_gauss.sigma", true},
        std::tuple{b.trunc_gauss_bounds, "trunc_gauss.bounds", false}}) {
    if (absl::Status s = ValidateInterval(box, name, pos); !s.ok()) return s;
  }
  if (b.uniform.lo < 0.0 || b.trunc_gauss_bounds.lo < 0.0) {
    return absl::InvalidArgumentError("support boxes must be non-negative");
  }
  for (const Interval& c : b.coef) {
    if (absl::Status s = ValidateInterval(c, "coef", false); !s.ok()) return s;
    if (c.lo < 0.0) {
      return absl::InvalidArgumentError("coefficients must be non-negative");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<OptimizationResult> Solve(const OptimizationProblem& problem,
                                         const SearchSpace& space,
                                         uint64_t seed) {
  const std::vector<Point> starts =
      LatinHypercube(problem.restarts, space.dimension(), seed);
  std::vector<Candidate> candidates(starts.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < starts.size(); i = next++) {
      candidates[i] = RunRestart(space, problem, starts[i]);
    }
  };
  int threads = problem.threads > 0
                    ? problem.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, problem.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const Candidate* best = nullptr;
  std::vector<RestartLog> logs;
  for (const Candidate& c : candidates) {
    RestartLog log = c.log;
    if (c.spec.has_value()) {
      log.objective = HigherIsBetter(problem.metric) ? 1.0 - c.loss : c.loss;
    } else {
      log.objective = std::numeric_limits<double>::quiet_NaN();
    }
    logs.push_back(std::move(log));
    if (!c.spec.has_value() || !(c.residual <= kFeasibilityTolerance) ||
        !std::isfinite(c.loss)) {
      continue;
    }
    if (best == nullptr ||
        PreferCandidate(c.loss, c.residual, c.spec->ActiveTerms(), best->loss,
                        best->residual, best->spec->ActiveTerms())) {
      best = &c;
    }
  }
  if (best == nullptr) {
    return absl::FailedPreconditionError(
        absl::StrCat("infeasible: no restart reached eps = ",
                     problem.eps_target, " within the search box"));
  }

  const DistributionSpec& spec = *best->spec;
  absl::StatusOr<double> objective = EvaluateMetric(
      spec, problem.metric, problem.gamma, kDefaultQuadratureTolerance);
  if (!objective.ok()) return objective.status();
  absl::StatusOr<double> eps = EpsGeneral(spec, problem.delta_q);
  if (!eps.ok()) return eps.status();
  absl::StatusOr<NecessaryCondition> necc =
      CheckNecessaryCondition(spec, problem.delta_q);
  if (!necc.ok()) return necc.status();
  const double baseline = BaselineObjective(problem.metric, problem.eps_target,
                                            problem.gamma, problem.delta_q);
  bool improved = HigherIsBetter(problem.metric)
                      ? *objective > baseline + kTieTolerance
                      : *objective < baseline - kTieTolerance;
  // An improvement in usefulness is impossible without the necessary
  // condition; a violation here can only be rounding at the boundary.
  if (problem.metric == Metric::kUsefulness && !necc->holds) improved = false;

  return OptimizationResult{
      .best_spec = spec,
      .metric = problem.metric,
      .objective = *objective,
      .eps_achieved = *eps,
      .constraint_residual = std::abs(*eps - problem.eps_target),
      .baseline_objective = baseline,
      .improved = improved,
      .necessary_condition = *necc,
      .per_restart_log = std::move(logs),
  };
}

double MinimizationLoss(const OptimizationResult& r) {
  return HigherIsBetter(r.metric) ? -r.objective : r.objective;
}

}  // namespace

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kUsefulness:
      return "usefulness";
    case Metric::kL1:
      return "l1";
    case Metric::kL2:
      return "l2";
    case Metric::kEntropy:
      return "entropy";
  }
  return "unknown";
}

absl::StatusOr<Metric> ParseMetric(std::string_view name) {
  for (Metric m :
       {Metric::kUsefulness, Metric::kL1, Metric::kL2, Metric::kEntropy}) {
    if (MetricName(m) == name) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown metric '", std::string(name), "'"));
}

bool HigherIsBetter(Metric metric) { return metric == Metric::kUsefulness; }

double BaselineUsefulness(double eps, double gamma, double delta_q) {
  return -std::expm1(-gamma * eps / delta_q);
}

double BaselineObjective(Metric metric, double eps, double gamma,
                         double delta_q) {
  const double b = delta_q / eps;
  switch (metric) {
    case Metric::kUsefulness:
      return BaselineUsefulness(eps, gamma, delta_q);
    case Metric::kL1:
      return b;
    case Metric::kL2:
      return std::sqrt(2.0) * b;
    case Metric::kEntropy:
      return 1.0 + std::log(b);
  }
  return 0.0;
}

absl::StatusOr<double> EvaluateMetric(const DistributionSpec& spec,
                                      Metric metric, double gamma,
                                      double abs_tol) {
  switch (metric) {
    case Metric::kUsefulness:
      return Usefulness(spec, gamma);
    case Metric::kL1:
      return L1Error(spec, abs_tol);
    case Metric::kL2:
      return L2Error(spec, abs_tol);
    case Metric::kEntropy:
      return EntropyTable(spec, abs_tol);
  }
  return absl::InvalidArgumentError("unknown metric");
}

bool PreferCandidate(double loss_a, double residual_a, int active_a,
                     double loss_b, double residual_b, int active_b) {
  if (std::abs(loss_a - loss_b) > kTieTolerance) return loss_a < loss_b;
  if (residual_a != residual_b) return residual_a < residual_b;
  return active_a < active_b;
}

absl::StatusOr<DistributionSpec> RescaleToEpsilon(const DistributionSpec& spec,
                                                  double eps_target,
                                                  double delta_q) {
  if (!(eps_target > 0.0 && delta_q > 0.0)) {
    return absl::InvalidArgumentError("eps_target and delta_q must be positive");
  }
  absl::StatusOr<double> c = RescaleFactor(spec, eps_target, delta_q);
  if (!c.ok()) return c.status();
  return ScaleSpec(spec, *c, /*scale_coefficients=*/false);
}

absl::StatusOr<OptimizationResult> OptimizeSingle(
    const OptimizationProblem& problem, FamilyKind kind) {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  if (std::find(problem.families.begin(), problem.families.end(), kind) ==
      problem.families.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("family ", std::string(FamilyName(kind)),
                     " is not part of the problem"));
  }
  const SearchSpace space({kind}, /*combined=*/false, problem.bounds);
  return Solve(problem, space,
               MixSeed(problem.seed ^ (static_cast<uint64_t>(kind) + 1)));
}

absl::StatusOr<OptimizationResult> OptimizeCombined(
    const OptimizationProblem& problem) {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  const SearchSpace space(problem.families, /*combined=*/true, problem.bounds);
  return Solve(problem, space, MixSeed(problem.seed ^ 0x636f6d62ULL));
}

absl::StatusOr<OptimizationResult> Optimize(
    const OptimizationProblem& problem) {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  if (problem.combined) return OptimizeCombined(problem);
  std::optional<OptimizationResult> best;
  absl::Status failure = absl::OkStatus();
  for (FamilyKind kind : problem.families) {
    absl::StatusOr<OptimizationResult> r = OptimizeSingle(problem, kind);
    if (!r.ok()) {
      if (!absl::IsFailedPrecondition(r.status())) return r.status();
      failure = r.status();
      continue;
    }
    if (!best.has_value() ||
        PreferCandidate(MinimizationLoss(*r), r->constraint_residual,
                        r->best_spec.ActiveTerms(), MinimizationLoss(*best),
                        best->constraint_residual,
                        best->best_spec.ActiveTerms())) {
      best = *std::move(r);
    }
  }
  if (!best.has_value()) return failure;
  return *std::move(best);
}

}  // namespace rdp
