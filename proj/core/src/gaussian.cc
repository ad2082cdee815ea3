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

#include "rdp/gaussian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

namespace rdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this point Q(x) is taken from erfc; above it from the Laplace
// continued fraction, which converges quickly there.
constexpr double kContinuedFractionStart = 4.0;

// K(x) = 1/(x + 2/(x + 3/(x + ...))), so that R(x) = 1/(x + K(x)).
double MillsContinuedFractionTail(double x) {
  constexpr double kTiny = 1e-300;
  double f = kTiny;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 10000; ++n) {
    const double a_n = (n == 1) ? 1.0 : static_cast<double>(n);
    d = x + a_n * d;
    if (d == 0.0) d = kTiny;
    c = x + a_n / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

// Q(b)/Q(a) for 0 <= a < b.
double TailRatio(double a, double b, const MillsTerms& ma) {
  if (std::isinf(b)) return 0.0;
  const MillsTerms mb = Mills(b);
  return std::exp(-0.5 * (b - a) * (b + a) + mb.log_ratio - ma.log_ratio);
}

}  // namespace

double NormalPdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double UpperTail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

MillsTerms Mills(double x) {
  if (std::isinf(x)) return {0.0, -kInf, 0.0};
  if (x < kContinuedFractionStart) {
    const double ratio = UpperTail(x) / NormalPdf(x);
    return {ratio, std::log(ratio), 1.0 - x * ratio};
  }
  const double k = MillsContinuedFractionTail(x);
  const double ratio = 1.0 / (x + k);
  return {ratio, -std::log(x + k), k * ratio};
}

double LogUpperTail(double x) {
  if (x >= 0.0) {
    if (std::isinf(x)) return -kInf;
    return -0.5 * x * x - kLogSqrt2Pi + Mills(x).log_ratio;
  }
  return std::log1p(-UpperTail(-x));
}

double InverseLogUpperTail(double log_q) {
  double x;
  if (log_q > -700.0) {
    const boost::math::normal standard;
    x = boost::math::quantile(boost::math::complement(standard,
                                                      std::exp(log_q)));
    if (log_q > -600.0) return x;
  } else {
    x = std::sqrt(-2.0 * log_q);
  }
  // Newton on ln Q, whose derivative is -1/R(x).
  for (int i = 0; i < 50; ++i) {
    const double step = (LogUpperTail(x) - log_q) * Mills(x).ratio;
    x += step;
    if (std::abs(step) <= 1e-15 * std::abs(x)) break;
  }
  return x;
}

double NormalQuantile(double p) {
  const boost::math::normal standard;
  return boost::math::quantile(standard, p);
}

SplitLogMass SplitLogGaussianMass(double a, double b) {
  if (a >= 0.0) {
    const MillsTerms ma = Mills(a);
    return {MassPivot::kLower,
            ma.log_ratio - kLogSqrt2Pi + std::log1p(-TailRatio(a, b, ma))};
  }
  if (b <= 0.0) {
    const MillsTerms mb = Mills(-b);
    return {MassPivot::kUpper,
            mb.log_ratio - kLogSqrt2Pi + std::log1p(-TailRatio(-b, -a, mb))};
  }
  return {MassPivot::kNone, std::log1p(-(UpperTail(-a) + UpperTail(b)))};
}

double LogGaussianMass(double a, double b) {
  const SplitLogMass split = SplitLogGaussianMass(a, b);
  switch (split.pivot) {
    case MassPivot::kLower:
      return -0.5 * a * a + split.rest;
    case MassPivot::kUpper:
      return -0.5 * b * b + split.rest;
    case MassPivot::kNone:
      break;
  }
  return split.rest;
}

double TruncatedMeanOffset(double a, double b) {
  const MillsTerms ma = Mills(a);
  if (std::isinf(b)) return ma.one_minus_x_ratio / ma.ratio;
  const MillsTerms mb = Mills(b);
  const double width = b - a;
  const double log_s = -0.5 * width * (b + a);
  const double s = std::exp(log_s);
  const double numerator =
      ma.one_minus_x_ratio - s * (mb.one_minus_x_ratio + width * mb.ratio);
  const double denominator =
      ma.ratio * -std::expm1(log_s + mb.log_ratio - ma.log_ratio);
  if (!(denominator > 0.0)) return 0.5 * width;
  return std::clamp(numerator / denominator, 0.0, width);
}

double TruncatedStandardMean(double a, double b) {
  if (a >= 0.0) return a + TruncatedMeanOffset(a, b);
  if (b <= 0.0) return b - TruncatedMeanOffset(-b, -a);
  const double mass = 1.0 - (UpperTail(-a) + UpperTail(b));
  const double pdf_a = std::isinf(a) ? 0.0 : NormalPdf(a);
  const double pdf_b = std::isinf(b) ? 0.0 : NormalPdf(b);
  return std::clamp((pdf_a - pdf_b) / mass, a, b);
}

}  // namespace rdp
