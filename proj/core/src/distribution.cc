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

#include "rdp/distribution.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "rdp/gaussian.h"

namespace rdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool IsPositiveFinite(double x) { return std::isfinite(x) && x > 0.0; }

// ln((e^z - 1) / z), the log-MGF of U(0, 1) at z.
double LogExpm1Ratio(double z) {
  if (std::abs(z) < 1e-5) return z / 2.0 + z * z / 24.0;
  if (z > 0.0) return z + std::log(-std::expm1(-z)) - std::log(z);
  return std::log(-std::expm1(z)) - std::log(-z);
}

// Mean of U(0, 1) tilted by e^{z x}: 1/(1 - e^{-z}) - 1/z.
double TiltedUnitMean(double z) {
  if (std::abs(z) < 0.05) {
    const double z2 = z * z;
    return 0.5 + z / 12.0 - z * z2 / 720.0 + z * z2 * z2 / 30240.0;
  }
  return 1.0 / -std::expm1(-z) - 1.0 / z;
}

double LogSumExp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

struct Standardized {
  double alpha;
  double beta;
};

Standardized StandardBounds(const TruncGauss& g) {
  return {(g.lo - g.mu) / g.sigma,
          std::isinf(g.hi) ? kInf : (g.hi - g.mu) / g.sigma};
}

double AnchorValue(MassPivot pivot, const Standardized& s) {
  switch (pivot) {
    case MassPivot::kLower:
      return s.alpha;
    case MassPivot::kUpper:
      return s.beta;
    case MassPivot::kNone:
      break;
  }
  return 0.0;
}

// M(t) = e^{mu t + sigma^2 t^2 / 2} [Phi(beta - sigma t) - Phi(alpha - sigma t)]
//        / [Phi(beta) - Phi(alpha)],
// evaluated in logs. Where the tilted mass is pivoted on a bound x - sigma t,
// the exponent and the Gaussian factor combine exactly into
// t * bound - x^2 / 2, which keeps huge |sigma t| harmless.
double TruncGaussLogMgf(const TruncGauss& g, double t) {
  if (t == 0.0) return 0.0;
  const Standardized s = StandardBounds(g);
  const double shift = g.sigma * t;
  const SplitLogMass base = SplitLogGaussianMass(s.alpha, s.beta);
  const SplitLogMass tilted =
      SplitLogGaussianMass(s.alpha - shift, s.beta - shift);
  double linear = 0.0;
  switch (tilted.pivot) {
    case MassPivot::kLower:
      linear = t * g.lo;
      break;
    case MassPivot::kUpper:
      linear = t * g.hi;
      break;
    case MassPivot::kNone:
      linear = t * (g.mu + 0.5 * g.sigma * shift);
      break;
  }
  const double tilted_anchor = AnchorValue(tilted.pivot, s);
  const double base_anchor = AnchorValue(base.pivot, s);
  const double quadratic =
      0.5 * (base_anchor - tilted_anchor) * (base_anchor + tilted_anchor);
  return linear + quadratic + tilted.rest - base.rest;
}

// Mean of N(mu + sigma^2 t, sigma^2) truncated to [lo, hi], anchored on the
// nearer bound when the tilted mean sits in a tail.
double TruncGaussTiltedMean(const TruncGauss& g, double t) {
  const Standardized s = StandardBounds(g);
  const double shift = g.sigma * t;
  const double a = s.alpha - shift;
  const double b = s.beta - shift;
  double mean;
  if (a >= 0.0) {
    mean = g.lo + g.sigma * TruncatedMeanOffset(a, b);
  } else if (b <= 0.0) {
    mean = g.hi - g.sigma * TruncatedMeanOffset(-b, -a);
  } else {
    mean = g.mu + g.sigma * shift + g.sigma * TruncatedStandardMean(a, b);
  }
  return std::clamp(mean, g.lo, g.hi);
}

double SampleStandardGamma(double k, Rng& rng) {
  if (k < 1.0) {
    // Boost the shape above one and correct with U^{1/k}.
    return SampleStandardGamma(k + 1.0, rng) *
           std::pow(rng.Uniform(), 1.0 / k);
  }
  // Marsaglia and Tsang squeeze/rejection.
  const double d = k - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double z = rng.StandardNormal();
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.Uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Inverse CDF on the truncated interval, worked from whichever tail keeps
// the arithmetic away from 1 - tiny.
double SampleTruncGauss(const TruncGauss& g, Rng& rng) {
  const Standardized s = StandardBounds(g);
  const double u = rng.Uniform();
  double x;
  if (s.alpha >= 0.0) {
    const double log_qa = LogUpperTail(s.alpha);
    const double ratio = std::exp(LogUpperTail(s.beta) - log_qa);
    x = InverseLogUpperTail(log_qa + std::log1p(-u * (1.0 - ratio)));
  } else if (s.beta <= 0.0) {
    const double log_qb = LogUpperTail(-s.beta);
    const double ratio = std::exp(LogUpperTail(-s.alpha) - log_qb);
    x = -InverseLogUpperTail(log_qb + std::log1p(-u * (1.0 - ratio)));
  } else {
    const double lower = NormalCdf(s.alpha);
    const double upper = NormalCdf(s.beta);
    x = NormalQuantile(lower + u * (upper - lower));
  }
  x = std::clamp(x, s.alpha, s.beta);
  return std::clamp(g.mu + g.sigma * x, g.lo, g.hi);
}

}  // namespace

FamilyKind KindOf(const BaseFamily& family) {
  return static_cast<FamilyKind>(family.index());
}

std::string_view FamilyName(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kDegenerate:
      return "degenerate";
    case FamilyKind::kBernoulli:
      return "bernoulli";
    case FamilyKind::kGamma:
      return "gamma";
    case FamilyKind::kUniform:
      return "uniform";
    case FamilyKind::kTruncGauss:
      return "trunc_gauss";
  }
  return "unknown";
}

absl::StatusOr<FamilyKind> ParseFamilyKind(std::string_view name) {
  for (FamilyKind kind :
       {FamilyKind::kDegenerate, FamilyKind::kBernoulli, FamilyKind::kGamma,
        FamilyKind::kUniform, FamilyKind::kTruncGauss}) {
    if (FamilyName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown distribution family '", std::string(name), "'"));
}

absl::Status ValidateFamily(const BaseFamily& family) {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) -> absl::Status {
            if (!IsPositiveFinite(d.k0)) {
              return absl::InvalidArgumentError(
                  "degenerate.k0 must be positive and finite");
            }
            return absl::OkStatus();
          },
          [](const Bernoulli& b) -> absl::Status {
            if (!(b.p >= 0.0 && b.p <= 1.0)) {
              return absl::InvalidArgumentError(
                  "bernoulli.p must lie in [0, 1]");
            }
            if (!IsPositiveFinite(b.x0)) {
              return absl::InvalidArgumentError(
                  "bernoulli.x0 must be positive and finite");
            }
            if (!IsPositiveFinite(b.x1)) {
              return absl::InvalidArgumentError(
                  "bernoulli.x1 must be positive and finite");
            }
            return absl::OkStatus();
          },
          [](const Gamma& g) -> absl::Status {
            if (!IsPositiveFinite(g.k)) {
              return absl::InvalidArgumentError(
                  "gamma.k must be positive and finite");
            }
            if (!IsPositiveFinite(g.theta)) {
              return absl::InvalidArgumentError(
                  "gamma.theta must be positive and finite");
            }
            return absl::OkStatus();
          },
          [](const Uniform& u) -> absl::Status {
            if (!(std::isfinite(u.a) && u.a >= 0.0)) {
              return absl::InvalidArgumentError(
                  "uniform.a must be finite and >= 0");
            }
            if (!(std::isfinite(u.b) && u.b > u.a)) {
              return absl::InvalidArgumentError(
                  "uniform.b must be finite and > uniform.a");
            }
            return absl::OkStatus();
          },
          [](const TruncGauss& g) -> absl::Status {
            if (!std::isfinite(g.mu)) {
              return absl::InvalidArgumentError("trunc_gauss.mu must be finite");
            }
            if (!IsPositiveFinite(g.sigma)) {
              return absl::InvalidArgumentError(
                  "trunc_gauss.sigma must be positive and finite");
            }
            if (!(std::isfinite(g.lo) && g.lo >= 0.0)) {
              return absl::InvalidArgumentError(
                  "trunc_gauss.lo must be finite and >= 0");
            }
            if (!(g.hi > g.lo) || std::isnan(g.hi) || g.hi == -kInf) {
              return absl::InvalidArgumentError(
                  "trunc_gauss.hi must be > trunc_gauss.lo (or \"inf\")");
            }
            // The interval must carry representable Gaussian mass.
            const Standardized s = StandardBounds(g);
            if (!std::isfinite(LogGaussianMass(s.alpha, s.beta))) {
              return absl::InvalidArgumentError(
                  "trunc_gauss interval has no representable mass");
            }
            return absl::OkStatus();
          },
      },
      family);
}

BaseFamily ScaleFamily(const BaseFamily& family, double c) {
  return std::visit(
      Overloaded{
          [c](const Degenerate& d) -> BaseFamily {
            return Degenerate{c * d.k0};
          },
          [c](const Bernoulli& b) -> BaseFamily {
            return Bernoulli{b.p, c * b.x0, c * b.x1};
          },
          [c](const Gamma& g) -> BaseFamily {
            return Gamma{g.k, c * g.theta};
          },
          [c](const Uniform& u) -> BaseFamily {
            return Uniform{c * u.a, c * u.b};
          },
          [c](const TruncGauss& g) -> BaseFamily {
            return TruncGauss{c * g.mu, c * g.sigma, c * g.lo, c * g.hi};
          },
      },
      family);
}

double FamilyLogMgf(const BaseFamily& family, double t) {
  return std::visit(
      Overloaded{
          [t](const Degenerate& d) { return t * d.k0; },
          [t](const Bernoulli& b) {
            if (b.p == 1.0) return t * b.x0;
            if (b.p == 0.0) return t * b.x1;
            return LogSumExp(std::log(b.p) + t * b.x0,
                             std::log1p(-b.p) + t * b.x1);
          },
          [t](const Gamma& g) {
            if (g.theta * t >= 1.0) return kInf;
            return -g.k * std::log1p(-g.theta * t);
          },
          [t](const Uniform& u) {
            return t * u.a + LogExpm1Ratio(t * (u.b - u.a));
          },
          [t](const TruncGauss& g) { return TruncGaussLogMgf(g, t); },
      },
      family);
}

double FamilyTiltedMean(const BaseFamily& family, double t) {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) { return d.k0; },
          [t](const Bernoulli& b) {
            if (b.p == 1.0) return b.x0;
            if (b.p == 0.0) return b.x1;
            const double l0 = std::log(b.p) + t * b.x0;
            const double l1 = std::log1p(-b.p) + t * b.x1;
            const double lse = LogSumExp(l0, l1);
            return std::exp(l0 - lse) * b.x0 + std::exp(l1 - lse) * b.x1;
          },
          [t](const Gamma& g) {
            if (g.theta * t >= 1.0) return kInf;
            return g.k * g.theta / (1.0 - g.theta * t);
          },
          [t](const Uniform& u) {
            return u.a + (u.b - u.a) * TiltedUnitMean(t * (u.b - u.a));
          },
          [t](const TruncGauss& g) { return TruncGaussTiltedMean(g, t); },
      },
      family);
}

double FamilyMgf(const BaseFamily& family, double t) {
  return std::exp(FamilyLogMgf(family, t));
}

double FamilyMgfDerivative(const BaseFamily& family, double t) {
  const double log_m = FamilyLogMgf(family, t);
  if (std::isinf(log_m) && log_m > 0) return kInf;
  return std::exp(log_m) * FamilyTiltedMean(family, t);
}

double FamilyMean(const BaseFamily& family) {
  return FamilyTiltedMean(family, 0.0);
}

double FamilySample(const BaseFamily& family, Rng& rng) {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) { return d.k0; },
          [&rng](const Bernoulli& b) {
            return rng.Uniform() < b.p ? b.x0 : b.x1;
          },
          [&rng](const Gamma& g) {
            return g.theta * SampleStandardGamma(g.k, rng);
          },
          [&rng](const Uniform& u) {
            return u.a + (u.b - u.a) * rng.Uniform();
          },
          [&rng](const TruncGauss& g) { return SampleTruncGauss(g, rng); },
      },
      family);
}

absl::StatusOr<DistributionSpec> DistributionSpec::Create(
    std::vector<Term> terms) {
  if (terms.empty()) {
    return absl::InvalidArgumentError("terms must not be empty");
  }
  bool any_positive = false;
  for (size_t i = 0; i < terms.size(); ++i) {
    const Term& term = terms[i];
    if (!(std::isfinite(term.coef) && term.coef >= 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "terms[", i, "].coef must be finite and >= 0"));
    }
    any_positive = any_positive || term.coef > 0.0;
    if (absl::Status status = ValidateFamily(term.family); !status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("terms[", i, "].family.", status.message()));
    }
  }
  if (!any_positive) {
    return absl::InvalidArgumentError(
        "at least one coefficient must be strictly positive");
  }
  return DistributionSpec(std::move(terms));
}

absl::StatusOr<DistributionSpec> DistributionSpec::Of(BaseFamily family) {
  return Create({Term{1.0, std::move(family)}});
}

std::optional<BaseFamily> DistributionSpec::AsSingleFamily() const {
  if (ActiveTerms() != 1) return std::nullopt;
  for (const Term& term : terms_) {
    if (term.coef > 0.0) {
      if (term.coef == 1.0) return term.family;
      return ScaleFamily(term.family, term.coef);
    }
  }
  return std::nullopt;
}

int DistributionSpec::ActiveTerms() const {
  return static_cast<int>(std::count_if(
      terms_.begin(), terms_.end(), [](const Term& t) { return t.coef > 0.0; }));
}

double LogMgf(const DistributionSpec& spec, double t) {
  if (t == 0.0) return 0.0;
  double sum = 0.0;
  for (const Term& term : spec.terms()) {
    if (term.coef == 0.0) continue;
    const double value = FamilyLogMgf(term.family, term.coef * t);
    if (value == kInf) return kInf;
    sum += value;
  }
  return sum;
}

double Mgf(const DistributionSpec& spec, double t) {
  return std::exp(LogMgf(spec, t));
}

double LogMgfDerivative(const DistributionSpec& spec, double t) {
  const double log_m = LogMgf(spec, t);
  if (log_m == kInf) return kInf;
  // Product rule: M' = M * sum_j a_j M_j'(a_j t) / M_j(a_j t).
  double weighted = 0.0;
  for (const Term& term : spec.terms()) {
    if (term.coef == 0.0) continue;
    weighted += term.coef * FamilyTiltedMean(term.family, term.coef * t);
  }
  return log_m + std::log(weighted);
}

double MgfDerivative(const DistributionSpec& spec, double t) {
  return std::exp(LogMgfDerivative(spec, t));
}

double MeanInvB(const DistributionSpec& spec) {
  double mean = 0.0;
  for (const Term& term : spec.terms()) {
    if (term.coef == 0.0) continue;
    mean += term.coef * FamilyMean(term.family);
  }
  return mean;
}

double SampleInvB(const DistributionSpec& spec, Rng& rng) {
  while (true) {
    double draw = 0.0;
    for (const Term& term : spec.terms()) {
      if (term.coef == 0.0) continue;
      draw += term.coef * FamilySample(term.family, rng);
    }
    if (draw > 0.0) return draw;
  }
}

}  // namespace rdp
