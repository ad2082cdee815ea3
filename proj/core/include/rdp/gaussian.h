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

// Standard-normal tail arithmetic that stays accurate far into both tails.
// The truncated-Gaussian family evaluates its MGF at tilted bounds that can sit
// hundreds of standard deviations from the mean, so nothing here forms
// Phi(b) - Phi(a) or exp(-x^2/2) directly when either would lose precision.

#ifndef RDP_GAUSSIAN_H_
#define RDP_GAUSSIAN_H_

namespace rdp {

// ln(sqrt(2*pi)).
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double NormalPdf(double x);
double NormalCdf(double x);

// Q(x) = 1 - Phi(x), computed with erfc so the upper tail keeps full relative
// precision until it underflows.
double UpperTail(double x);

// ln Q(x), finite for every finite x.
double LogUpperTail(double x);

// Mills ratio R(x) = Q(x) / phi(x) together with the derived quantities the
// truncated-normal formulas need. Requires x >= 0.
struct MillsTerms {
  double ratio;              // R(x)
  double log_ratio;          // ln R(x)
  double one_minus_x_ratio;  // 1 - x R(x), accurate for large x
};
MillsTerms Mills(double x);

// Inverse of LogUpperTail: the x with ln Q(x) = log_q.
double InverseLogUpperTail(double log_q);

// Phi^{-1}(p) for p in (0, 1).
double NormalQuantile(double p);

// ln(Phi(b) - Phi(a)) for a < b (either may be infinite), split as
// -pivot^2/2 + rest so callers can cancel the Gaussian factor symbolically.
enum class MassPivot { kLower, kUpper, kNone };
struct SplitLogMass {
  MassPivot pivot;  // pivot is a (kLower), b (kUpper) or 0 (kNone)
  double rest;
};
SplitLogMass SplitLogGaussianMass(double a, double b);
double LogGaussianMass(double a, double b);

// E[Z | a < Z < b] - a for a standard normal Z and 0 <= a < b <= inf.
double TruncatedMeanOffset(double a, double b);

// E[Z | a < Z < b] for a standard normal Z, any a < b.
double TruncatedStandardMean(double a, double b);

}  // namespace rdp

#endif  // RDP_GAUSSIAN_H_
