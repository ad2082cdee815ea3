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

// Distributions for the reciprocal scale 1/b of a compound Laplace mechanism.
//
// A DistributionSpec is a non-negative linear combination sum_i a_i x_i of
// independent draws from five base families. Everything the privacy and
// utility analyses need is expressed through the moment generating function
// M(t) = E[exp(t / b)], which for a combination factorises as
// prod_i M_i(a_i t).
//
// MGF values are carried in the log domain. A log-MGF of +infinity is the
// "does not exist" value (Gamma at a_i t theta >= 1); it is a value, not an
// error.

#ifndef RDP_DISTRIBUTION_H_
#define RDP_DISTRIBUTION_H_

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "rdp/random.h"

namespace rdp {

// Point mass at k0.
struct Degenerate {
  double k0;
};

// x0 with probability p, x1 with probability 1 - p.
struct Bernoulli {
  double p;
  double x0;
  double x1;
};

// Shape k, scale theta.
struct Gamma {
  double k;
  double theta;
};

// Uniform on [a, b].
struct Uniform {
  double a;
  double b;
};

// N(mu, sigma^2) conditioned on [lo, hi]; hi may be +infinity.
struct TruncGauss {
  double mu;
  double sigma;
  double lo;
  double hi;
};

using BaseFamily = std::variant<Degenerate, Bernoulli, Gamma, Uniform, TruncGauss>;

enum class FamilyKind { kDegenerate, kBernoulli, kGamma, kUniform, kTruncGauss };

FamilyKind KindOf(const BaseFamily& family);
std::string_view FamilyName(FamilyKind kind);
absl::StatusOr<FamilyKind> ParseFamilyKind(std::string_view name);

// Rejects parameters outside the family's domain, including any support
// reaching below zero.
absl::Status ValidateFamily(const BaseFamily& family);

// The distribution of c * X for X drawn from `family`, c > 0.
BaseFamily ScaleFamily(const BaseFamily& family, double c);

double FamilyLogMgf(const BaseFamily& family, double t);
// d/dt ln M(t) = M'(t) / M(t): the mean under the exponentially tilted law.
double FamilyTiltedMean(const BaseFamily& family, double t);
double FamilyMgf(const BaseFamily& family, double t);
double FamilyMgfDerivative(const BaseFamily& family, double t);
double FamilyMean(const BaseFamily& family);
double FamilySample(const BaseFamily& family, Rng& rng);

struct Term {
  double coef;
  BaseFamily family;
};

class DistributionSpec {
 public:
  // Requires a non-empty term list, every coefficient >= 0, at least one
  // strictly positive, and valid family parameters.
  static absl::StatusOr<DistributionSpec> Create(std::vector<Term> terms);
  static absl::StatusOr<DistributionSpec> Of(BaseFamily family);

  const std::vector<Term>& terms() const { return terms_; }

  // When exactly one term has a positive coefficient, that term as a single
  // family with the coefficient folded into its parameters.
  std::optional<BaseFamily> AsSingleFamily() const;

  // Number of terms with a positive coefficient.
  int ActiveTerms() const;

 private:
  explicit DistributionSpec(std::vector<Term> terms)
      : terms_(std::move(terms)) {}

  std::vector<Term> terms_;
};

// ln M(t); exactly 0 at t = 0, +infinity where the MGF does not exist.
double LogMgf(const DistributionSpec& spec, double t);
double Mgf(const DistributionSpec& spec, double t);

// ln M'(t) where M'(t) = sum_j a_j M_j'(a_j t) prod_{i != j} M_i(a_i t).
double LogMgfDerivative(const DistributionSpec& spec, double t);
double MgfDerivative(const DistributionSpec& spec, double t);

// E[1/b] = sum_i a_i E[x_i].
double MeanInvB(const DistributionSpec& spec);

// One strictly positive draw of 1/b.
double SampleInvB(const DistributionSpec& spec, Rng& rng);

}  // namespace rdp

#endif  // RDP_DISTRIBUTION_H_
