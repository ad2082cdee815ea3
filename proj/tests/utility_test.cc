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
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "rdp/distribution.h"
#include "rdp/random.h"
#include "test_support.h"

namespace rdp {
namespace {

using ::rdp::testutil::FamilyExpectation;
using ::rdp::testutil::Generator;
using ::rdp::testutil::HalfLine;
using ::rdp::testutil::Mix;
using ::rdp::testutil::Single;
using ::testing::DoubleEq;
using ::testing::DoubleNear;
using ::testing::Eq;
using ::testing::Ge;
using ::testing::HasSubstr;
using ::testing::Le;
using ::testing::Lt;

constexpr int kNumSamples = 1000000;

MATCHER_P2(RelativelyNear, want, rel, "") {
  return std::abs(arg - want) <= rel * std::abs(want);
}

double Value(const absl::StatusOr<double>& v) {
  EXPECT_TRUE(v.ok()) << v.status();
  return v.value_or(std::nan(""));
}

// Laplace noise with a fresh reciprocal scale per draw, built from the
// sampling primitives only.
double DrawNoise(const DistributionSpec& spec, Rng& rng) {
  const double inv_b = SampleInvB(spec, rng);
  const double magnitude = rng.Exponential() / inv_b;
  return rng.Uniform() < 0.5 ? -magnitude : magnitude;
}

TEST(NoisePdfTest, Examples) {
  EXPECT_THAT(NoisePdf(Single(Degenerate{1.0}), 0.0), DoubleEq(0.5));
  EXPECT_THAT(NoisePdf(Single(Degenerate{2.0}), 1.0), DoubleNear(std::exp(-2.0), 1e-15));
  EXPECT_THAT(NoisePdf(Single(Degenerate{2.0}), 1.0), DoubleNear(0.135335, 1e-6));
  const BaseFamily gamma = Gamma{2.0, 0.5};
  EXPECT_THAT(NoisePdf(Single(gamma), 1.0), DoubleNear(0.148148, 1e-6));
  const double mixed =
      FamilyExpectation(gamma, [](double s) { return 0.5 * s * std::exp(-s); });
  EXPECT_THAT(NoisePdf(Single(gamma), 1.0), RelativelyNear(mixed, 1e-10));
  EXPECT_THAT(NoisePdf(Single(gamma), -1.0), DoubleEq(NoisePdf(Single(gamma), 1.0)));
}

TEST(NoisePdfTest, LogDensityIsConsistent) {
  Generator gen(41);
  for (int i = 0; i < 200; ++i) {
    const DistributionSpec spec = gen.Spec();
    const double x = gen.In(-20.0, 20.0);
    EXPECT_THAT(LogNoisePdf(spec, x),
                DoubleNear(std::log(NoisePdf(spec, x)), 1e-12 * (1 + std::abs(LogNoisePdf(spec, x)))));
  }
}

TEST(NoisePdfTest, IntegratesToOne) {
  Generator gen(42);
  for (int i = 0; i < 100; ++i) {
    const DistributionSpec spec = gen.Spec();
    const double scale = 1.0 / MeanInvB(spec);
    const double total =
        2.0 * (testutil::Finite(0.0, scale, [&](double x) { return NoisePdf(spec, x); }) +
               HalfLine(scale, [&](double x) { return NoisePdf(spec, x); }));
    EXPECT_THAT(total, DoubleNear(1.0, 1e-8)) << i;
  }
}

TEST(NoiseCdfTest, Examples) {
  Generator gen(43);
  for (int i = 0; i < 50; ++i) EXPECT_THAT(NoiseCdf(gen.Spec(), 0.0), DoubleEq(0.5));
  EXPECT_THAT(NoiseCdf(Single(Degenerate{1.0}), 1.0), DoubleNear(1 - 0.5 * std::exp(-1.0), 1e-15));
  EXPECT_THAT(NoiseCdf(Single(Degenerate{1.0}), 1.0), DoubleNear(0.816060, 1e-6));
  for (int i = 0; i < 50; ++i) {
    const DistributionSpec spec = gen.Spec();
    if (std::holds_alternative<Gamma>(spec.terms()[0].family)) continue;
    // Only light-tailed specs reach 1 this quickly.
    bool light = true;
    for (const Term& t : spec.terms()) light &= !std::holds_alternative<Gamma>(t.family);
    if (!light) continue;
    bool bounded_below = true;
    for (const Term& t : spec.terms()) {
      if (const auto* u = std::get_if<Uniform>(&t.family)) bounded_below &= u->a > 0.5;
      else if (const auto* b = std::get_if<Bernoulli>(&t.family)) bounded_below &= std::min(b->x0, b->x1) > 0.5;
      else if (const auto* d = std::get_if<Degenerate>(&t.family)) bounded_below &= d->k0 > 0.5;
      else bounded_below = false;
    }
    if (!bounded_below) continue;
    EXPECT_THAT(NoiseCdf(spec, 50.0 / MeanInvB(spec)), DoubleNear(1.0, 1e-12)) << i;
  }
  EXPECT_THAT(NoiseCdf(Single(Gamma{2.0, 0.5}), 50.0), DoubleNear(1.0, 1e-3));
}

TEST(NoiseCdfTest, MonotoneAndAntisymmetric) {
  Generator gen(44);
  for (int i = 0; i < 100; ++i) {
    const DistributionSpec spec = gen.Spec();
    double previous = 0.0;
    for (double x = -30.0; x <= 30.0; x += 0.07) {
      const double f = NoiseCdf(spec, x);
      EXPECT_THAT(f, Ge(previous)) << i << " x=" << x;
      previous = f;
      // Equal up to the rounding of 1 - F.
      EXPECT_THAT(NoiseCdf(spec, -x), DoubleNear(1.0 - f, 2e-16)) << i << " x=" << x;
    }
  }
}

TEST(NoiseCdfTest, MatchesIntegratedDensity) {
  Generator gen(45);
  for (int i = 0; i < 100; ++i) {
    const DistributionSpec spec = gen.Spec();
    const double x = gen.In(0.0, 5.0) / MeanInvB(spec);
    const double mass = testutil::Finite(0.0, x, [&](double u) { return NoisePdf(spec, u); });
    EXPECT_THAT(NoiseCdf(spec, x), DoubleNear(0.5 + mass, 1e-9)) << i;
  }
}

TEST(UsefulnessTest, Examples) {
  EXPECT_THAT(Usefulness(Single(Degenerate{1.0}), 1.0), DoubleNear(0.632121, 1e-6));
  EXPECT_THAT(Usefulness(Single(Gamma{2.0, 0.5}), 1.0), DoubleNear(1 - 1 / 2.25, 1e-15));
  EXPECT_THAT(Usefulness(Single(Gamma{2.0, 0.5}), 1.0), DoubleNear(0.555556, 1e-6));
  Generator gen(46);
  for (int i = 0; i < 100; ++i) {
    // First order in gamma: U = gamma E[1/b] + O(gamma^2).
    const DistributionSpec spec = gen.Spec();
    const double u = Usefulness(spec, 1e-10);
    EXPECT_THAT(u, DoubleNear(1e-10 * MeanInvB(spec), 1e-16 * MeanInvB(spec) + 1e-12)) << i;
    if (MeanInvB(spec) <= 10.0) EXPECT_THAT(u, DoubleNear(0.0, 1e-9)) << i;
  }
}

TEST(UsefulnessTest, GammaMatchesMonteCarlo) {
  const DistributionSpec spec = Single(Gamma{2.0, 0.5});
  Rng rng(47);
  int inside = 0;
  for (int i = 0; i < kNumSamples; ++i) inside += std::abs(DrawNoise(spec, rng)) <= 1.0;
  EXPECT_THAT(static_cast<double>(inside) / kNumSamples, DoubleNear(0.555556, 0.002));
}

TEST(UsefulnessTest, EqualsCdfDifference) {
  Generator gen(48);
  for (int i = 0; i < 300; ++i) {
    const DistributionSpec spec = gen.Spec();
    const double gamma = gen.LogIn(1e-3, 20.0);
    EXPECT_THAT(Usefulness(spec, gamma),
                DoubleNear(NoiseCdf(spec, gamma) - NoiseCdf(spec, -gamma), 1e-12));
  }
}

TEST(MetricTest, DegenerateExamples) {
  EXPECT_THAT(Value(L1Error(Single(Degenerate{2.0}))), DoubleNear(0.5, 1e-10));
  EXPECT_THAT(Value(L2Error(Single(Degenerate{2.0}))), DoubleNear(std::sqrt(0.5), 1e-10));
  EXPECT_THAT(Value(L2Error(Single(Degenerate{2.0}))), DoubleNear(0.707107, 1e-6));
  EXPECT_THAT(Value(EntropyTable(Single(Degenerate{1.0}))), DoubleNear(1.0, 1e-10));
}

TEST(MetricTest, GammaClosedForms) {
  // E[b] = 1/(theta (k-1)); entropy table value 1.5 for Gamma(2, 0.5).
  const DistributionSpec spec = Single(Gamma{2.0, 0.5});
  EXPECT_THAT(Value(L1Error(spec)), DoubleNear(2.0, 1e-8));
  EXPECT_THAT(Value(EntropyTable(spec)), DoubleNear(1.5, 1e-8));
  const absl::StatusOr<double> l2 = L2Error(spec);
  EXPECT_THAT(l2.status().code(), Eq(absl::StatusCode::kOutOfRange));
  EXPECT_THAT(l2.status().message(), HasSubstr("diverges"));
  // k = 3 has E[b^2] = 1/(theta^2 (k-1)(k-2)).
  const DistributionSpec k3 = Single(Gamma{3.0, 0.5});
  EXPECT_THAT(Value(L2Error(k3)), DoubleNear(std::sqrt(2.0 * 4.0 / 2.0), 1e-7));
}

TEST(MetricTest, DivergesForHeavyScaleTails) {
  const absl::StatusOr<double> l1 = L1Error(Single(Gamma{0.8, 1.0}));
  EXPECT_THAT(l1.status().code(), Eq(absl::StatusCode::kOutOfRange));
  EXPECT_THAT(l1.status().message(), HasSubstr("diverges"));
  EXPECT_FALSE(L1Error(Single(Gamma{1.0, 1.0})).ok());
  EXPECT_TRUE(L1Error(Single(Gamma{1.2, 1.0})).ok());
  EXPECT_FALSE(L2Error(Single(Gamma{1.5, 1.0})).ok());
  // A uniform law touching zero has E[b] infinite.
  EXPECT_FALSE(L1Error(Single(Uniform{0.0, 1.0})).ok());
}

TEST(ScaleMomentTest, MatchesClosedForms) {
  Generator gen(49);
  for (int i = 0; i < 50; ++i) {
    const double k = gen.In(3.5, 30.0);
    const double theta = gen.LogIn(0.01, 3.0);
    const DistributionSpec gamma = Single(Gamma{k, theta});
    for (int n : {1, 2, 3}) {
      const double want = std::exp(std::lgamma(k - n) - std::lgamma(k)) / std::pow(theta, n);
      EXPECT_THAT(Value(ScaleMoment(gamma, n)), RelativelyNear(want, 1e-7)) << k << " " << n;
    }
    const double a = gen.In(0.1, 5.0);
    const double b = a + gen.LogIn(0.01, 5.0);
    const DistributionSpec uniform = Single(Uniform{a, b});
    EXPECT_THAT(Value(ScaleMoment(uniform, 1)), RelativelyNear(std::log(b / a) / (b - a), 1e-8));
    EXPECT_THAT(Value(ScaleMoment(uniform, 2)), RelativelyNear(1 / (a * b), 1e-8));
  }
}

TEST(MetricTest, MatchesLiteralIntegrals) {
  Generator gen(50);
  int checked = 0;
  for (int i = 0; checked < 25 && i < 200; ++i) {
    const DistributionSpec spec = gen.Spec(2);
    const absl::StatusOr<double> l1 = L1Error(spec);
    const absl::StatusOr<double> l2 = L2Error(spec);
    const absl::StatusOr<double> entropy = EntropyTable(spec);
    if (!l1.ok() || !l2.ok() || !entropy.ok()) continue;
    ++checked;
    auto tail = [&](double x) {
      return HalfLine(x, [&](double u) { return Mgf(spec, -u); });
    };
    const double l1_oracle = HalfLine(0.0, [&](double x) { return Mgf(spec, -x); });
    EXPECT_THAT(*l1, RelativelyNear(l1_oracle, 1e-7)) << i;
    // Inner integral over [x, inf), outer over [0, inf), taken literally.
    const double l2_oracle = std::sqrt(2.0 * HalfLine(0.0, tail));
    EXPECT_THAT(*l2, RelativelyNear(l2_oracle, 1e-6)) << i;
    const double entropy_oracle = HalfLine(0.0, [&](double x) {
      const double d = MgfDerivative(spec, -x);
      return d > 0.0 ? -d * std::log(d) : 0.0;
    });
    EXPECT_THAT(*entropy, DoubleNear(entropy_oracle, 1e-7 * (1 + std::abs(entropy_oracle)))) << i;
    EXPECT_THAT(*l1, Le(*l2 * (1 + 1e-12))) << i;
  }
  EXPECT_THAT(checked, Eq(25));
}

TEST(MetricTest, L1NeverExceedsL2) {
  Generator gen(51);
  for (int i = 0; i < 200; ++i) {
    const DistributionSpec spec = gen.Spec();
    const absl::StatusOr<double> l1 = L1Error(spec);
    const absl::StatusOr<double> l2 = L2Error(spec);
    if (l1.ok() && l2.ok()) EXPECT_THAT(*l1, Le(*l2 * (1 + 1e-10))) << i;
  }
}

TEST(MetricTest, MonteCarloAgreement) {
  const DistributionSpec specs[] = {
      Single(Uniform{1.0, 2.0}), Single(Gamma{6.0, 0.3}),
      Mix({{0.6, Gamma{5.0, 0.5}}, {0.4, Uniform{0.5, 9.0}}}),
      Single(TruncGauss{2.0, 1.0, 0.5, 4.0})};
  constexpr double kGamma = 0.7;
  for (const DistributionSpec& spec : specs) {
    Rng rng(52);
    double abs_sum = 0.0;
    double abs_sq = 0.0;
    int inside = 0;
    for (int i = 0; i < kNumSamples; ++i) {
      const double a = std::abs(DrawNoise(spec, rng));
      abs_sum += a;
      abs_sq += a * a;
      inside += a <= kGamma;
    }
    const double mean = abs_sum / kNumSamples;
    const double se = std::sqrt((abs_sq / kNumSamples - mean * mean) / kNumSamples);
    EXPECT_THAT(mean, DoubleNear(Value(L1Error(spec)), 4 * se));
    const double u = Usefulness(spec, kGamma);
    const double p = static_cast<double>(inside) / kNumSamples;
    EXPECT_THAT(p, DoubleNear(u, 4 * std::sqrt(u * (1 - u) / kNumSamples)));
  }
}

TEST(AnalyzeUtilityTest, ReportsEntropyOffsetAndDivergence) {
  absl::StatusOr<UtilityReport> report = AnalyzeUtility(Single(Degenerate{1.0}), 1.0);
  ASSERT_TRUE(report.ok());
  EXPECT_THAT(report->gamma, Eq(1.0));
  EXPECT_THAT(report->usefulness, DoubleNear(0.632121, 1e-6));
  ASSERT_TRUE(report->entropy_true.has_value());
  EXPECT_THAT(*report->entropy_true, DoubleNear(1 + std::numbers::ln2, 1e-10));
  EXPECT_THAT(*report->entropy_true - *report->entropy_table, DoubleNear(std::numbers::ln2, 1e-14));

  absl::StatusOr<UtilityReport> gamma = AnalyzeUtility(Single(Gamma{2.0, 0.5}), 1.0);
  ASSERT_TRUE(gamma.ok());
  EXPECT_TRUE(gamma->l1.has_value());
  EXPECT_FALSE(gamma->l2.has_value());

  EXPECT_THAT(AnalyzeUtility(Single(Degenerate{1.0}), 0.0).status().code(),
              Eq(absl::StatusCode::kInvalidArgument));
}

}  // namespace
}  // namespace rdp
