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

#include "rdp/verify.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "rdp/distribution.h"
#include "rdp/random.h"
#include "test_support.h"

namespace rdp {
namespace {

using ::rdp::testutil::Mix;
using ::rdp::testutil::OracleFamilyMgf;
using ::rdp::testutil::OracleFamilyMgfDerivative;
using ::rdp::testutil::Single;
using ::testing::AnyOf;
using ::testing::DoubleNear;
using ::testing::Eq;
using ::testing::HasSubstr;
using ::testing::Le;
using ::testing::SizeIs;

// ln(E[X] / M'(-dq)) with M the product of scaled family MGFs, from the
// quadrature oracles.
double OracleEps(const DistributionSpec& spec, double dq) {
  auto derivative = [&](double t) {
    double total = 0.0;
    for (size_t i = 0; i < spec.terms().size(); ++i) {
      const Term& ti = spec.terms()[i];
      if (ti.coef == 0.0) continue;
      double part = ti.coef * OracleFamilyMgfDerivative(ti.family, ti.coef * t);
      for (size_t j = 0; j < spec.terms().size(); ++j) {
        const Term& tj = spec.terms()[j];
        if (j != i && tj.coef != 0.0) {
          part *= OracleFamilyMgf(tj.family, tj.coef * t);
        }
      }
      total += part;
    }
    return total;
  };
  return std::log(derivative(0.0) / derivative(-dq));
}

const MetricCheck* Find(const std::vector<MetricCheck>& checks,
                        const std::string& name) {
  for (const MetricCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

TEST(CertifyPrivacyTest, DegenerateIsExactlyOne) {
  RDP_ASSERT_OK_AND_ASSIGN(DensityPrivacyCheck check,
                           CertifyPrivacy(Single(Degenerate{1.0}), 1.0, 5.0));
  EXPECT_THAT(check.eps_density_sup, DoubleNear(1.0, 1e-12));
}

TEST(CertifyPrivacyTest, GammaSupAtSegmentEnd) {
  RDP_ASSERT_OK_AND_ASSIGN(
      DensityPrivacyCheck check,
      CertifyPrivacy(Single(Gamma{2.0, 0.5}), 1.0, 5.0));
  EXPECT_THAT(check.eps_density_sup, DoubleNear(3.0 * std::log(1.5), 1e-6));
  EXPECT_THAT(check.eps_density_sup, DoubleNear(1.216395, 1e-6));
  EXPECT_THAT(check.argmax_x,
              AnyOf(DoubleNear(0.0, 1e-9), DoubleNear(1.0, 1e-9)));
}

TEST(CertifyPrivacyTest, UniformSymmetricArgmax) {
  RDP_ASSERT_OK_AND_ASSIGN(
      DensityPrivacyCheck check,
      CertifyPrivacy(Single(Uniform{1.0, 2.0}), 2.0, 10.0, 2001));
  EXPECT_THAT(check.argmax_x,
              AnyOf(DoubleNear(0.0, 1e-9), DoubleNear(2.0, 1e-9)));
}

TEST(CertifyPrivacyTest, CorpusMatchesOracle) {
  const std::vector<DistributionSpec> corpus = RegressionCorpus();
  ASSERT_THAT(corpus, SizeIs(10));
  for (const DistributionSpec& spec : corpus) {
    RDP_ASSERT_OK_AND_ASSIGN(DensityPrivacyCheck check,
                             CertifyPrivacy(spec, 1.0, 5.0));
    const double oracle = OracleEps(spec, 1.0);
    EXPECT_THAT(check.eps_density_sup, DoubleNear(oracle, 1e-6));
    EXPECT_THAT(oracle, Le(4.0));
  }
}

TEST(CertifyPrivacyTest, RejectsBadArguments) {
  EXPECT_FALSE(CertifyPrivacy(Single(Gamma{2.0, 0.5}), 0.0, 5.0).ok());
  EXPECT_FALSE(CertifyPrivacy(Single(Gamma{2.0, 0.5}), 1.0, -1.0).ok());
}

TEST(CertifyPrivacySampledTest, DegenerateWithinFivePercent) {
  RDP_ASSERT_OK_AND_ASSIGN(
      SampledPrivacyCheck check,
      CertifyPrivacySampled(Single(Degenerate{1.0}), 1.0, 1000000, 0, 7));
  EXPECT_THAT(check.eps_empirical, DoubleNear(1.0, 0.05));
  EXPECT_FALSE(check.low_confidence);
  EXPECT_GT(check.std_error, 0.0);
  EXPECT_LT(check.std_error, 0.05);
}

TEST(CertifyPrivacySampledTest, GammaWithinFivePercent) {
  RDP_ASSERT_OK_AND_ASSIGN(
      SampledPrivacyCheck check,
      CertifyPrivacySampled(Single(Gamma{2.0, 0.5}), 1.0, 1000000, 0, 11));
  EXPECT_THAT(check.eps_empirical, DoubleNear(1.216395, 0.05 * 1.216395));
  EXPECT_FALSE(check.low_confidence);
}

TEST(CertifyPrivacySampledTest, FlatRatioHasNoUpwardDrift) {
  // Every bin outside the segment has log ratio exactly 4.
  RDP_ASSERT_OK_AND_ASSIGN(
      SampledPrivacyCheck check,
      CertifyPrivacySampled(Single(Degenerate{4.0}), 1.0, 1000000, 0, 3));
  EXPECT_THAT(check.eps_empirical, DoubleNear(4.0, 0.05 * 4.0));
}

TEST(CertifyPrivacySampledTest, SmallSampleIsLowConfidence) {
  RDP_ASSERT_OK_AND_ASSIGN(
      SampledPrivacyCheck check,
      CertifyPrivacySampled(Single(Gamma{2.0, 0.5}), 1.0, 10000, 0, 1));
  EXPECT_TRUE(check.low_confidence);
}

TEST(CertifyPrivacySampledTest, BinWidthDividesSensitivity) {
  RDP_ASSERT_OK_AND_ASSIGN(
      SampledPrivacyCheck check,
      CertifyPrivacySampled(Single(Uniform{1.0, 2.0}), 1.5, 100000, 0, 5));
  const double bins = 1.5 / check.bin_width;
  EXPECT_THAT(bins, DoubleNear(std::round(bins), 1e-9));
  EXPECT_GT(check.bins_used, 0);
}

TEST(CertifyPrivacySampledTest, Deterministic) {
  const DistributionSpec spec = Single(Gamma{3.0, 0.2});
  RDP_ASSERT_OK_AND_ASSIGN(SampledPrivacyCheck a,
                           CertifyPrivacySampled(spec, 1.0, 20000, 0, 9));
  RDP_ASSERT_OK_AND_ASSIGN(SampledPrivacyCheck b,
                           CertifyPrivacySampled(spec, 1.0, 20000, 0, 9));
  EXPECT_THAT(a.eps_empirical, Eq(b.eps_empirical));
  EXPECT_THAT(a.std_error, Eq(b.std_error));
}

TEST(CertifyPrivacySampledTest, RejectsBadArguments) {
  const DistributionSpec spec = Single(Gamma{2.0, 0.5});
  EXPECT_THAT(std::string(
                  CertifyPrivacySampled(spec, 1.0, 10, 0, 1).status().message()),
              HasSubstr("samples"));
  EXPECT_FALSE(CertifyPrivacySampled(spec, -1.0, 10000, 0, 1).ok());
}

TEST(CertifyUtilityTest, DegenerateL1) {
  // Laplace with scale 1/2: E|noise| = 1/2, rms = sqrt(2)/2.
  RDP_ASSERT_OK_AND_ASSIGN(
      std::vector<MetricCheck> checks,
      CertifyUtility(Single(Degenerate{2.0}), 1.0, 200000, 3));
  const MetricCheck* l1 = Find(checks, "l1");
  ASSERT_NE(l1, nullptr);
  EXPECT_THAT(l1->analytic, DoubleNear(0.5, 1e-12));
  EXPECT_TRUE(l1->pass);
  const MetricCheck* l2 = Find(checks, "l2");
  ASSERT_NE(l2, nullptr);
  EXPECT_THAT(l2->analytic, DoubleNear(std::sqrt(0.5), 1e-12));
  EXPECT_TRUE(l2->pass);
  for (const MetricCheck& c : checks) EXPECT_TRUE(c.pass) << c.name;
}

TEST(CertifyUtilityTest, GammaSkipsDivergentChecks) {
  RDP_ASSERT_OK_AND_ASSIGN(
      std::vector<MetricCheck> checks,
      CertifyUtility(Single(Gamma{2.0, 0.5}), 1.0, 200000, 4));
  const MetricCheck* useful = Find(checks, "usefulness");
  ASSERT_NE(useful, nullptr);
  // 1 - (1 + gamma theta)^-k.
  EXPECT_THAT(useful->analytic, DoubleNear(1.0 - 1.0 / 2.25, 1e-12));
  EXPECT_TRUE(useful->pass);
  const MetricCheck* l1 = Find(checks, "l1");
  ASSERT_NE(l1, nullptr);
  EXPECT_FALSE(l1->enforced);
  const MetricCheck* l2 = Find(checks, "l2");
  ASSERT_NE(l2, nullptr);
  EXPECT_FALSE(l2->enforced);
  EXPECT_THAT(l2->note, HasSubstr("diverges"));
}

TEST(CertifyUtilityTest, UniformL2) {
  // E[b^2] = integral of x^-2 over [1, 2] = 1/2, so rms = 1.
  RDP_ASSERT_OK_AND_ASSIGN(
      std::vector<MetricCheck> checks,
      CertifyUtility(Single(Uniform{1.0, 2.0}), 1.0, 200000, 5));
  const MetricCheck* l2 = Find(checks, "l2");
  ASSERT_NE(l2, nullptr);
  EXPECT_THAT(l2->analytic, DoubleNear(1.0, 1e-10));
  EXPECT_TRUE(l2->pass);
  const MetricCheck* entropy = Find(checks, "entropy_true");
  ASSERT_NE(entropy, nullptr);
  EXPECT_TRUE(entropy->pass);
}

TEST(CertifyUtilityTest, RejectsBadGamma) {
  EXPECT_FALSE(CertifyUtility(Single(Degenerate{1.0}), 0.0, 10000, 1).ok());
}

TEST(VerifyTest, GammaReportPasses) {
  RDP_ASSERT_OK_AND_ASSIGN(
      VerificationReport report,
      Verify(Single(Gamma{2.0, 0.5}), 1.0, 1.0, 1000000, 1));
  EXPECT_THAT(report.eps_analytic, DoubleNear(1.216395, 1e-6));
  EXPECT_THAT(report.eps_density_sup, DoubleNear(report.eps_analytic, 1e-6));
  EXPECT_FALSE(report.low_confidence);
  EXPECT_TRUE(report.passed);
}

TEST(VerifyTest, CombinedSpecPasses) {
  const DistributionSpec spec =
      Mix({{0.6, Gamma{2.0, 0.5}}, {0.4, Uniform{1.0, 2.0}}});
  RDP_ASSERT_OK_AND_ASSIGN(VerificationReport report,
                           Verify(spec, 1.0, 1.0, 1000000, 2));
  EXPECT_THAT(report.eps_analytic, DoubleNear(OracleEps(spec, 1.0), 1e-8));
  EXPECT_TRUE(report.passed);
}

TEST(KolmogorovSmirnovTest, SinglePoint) {
  EXPECT_THAT(KolmogorovSmirnovStatistic({0.5}, [](double x) { return x; }),
              DoubleNear(0.5, 1e-15));
}

TEST(KolmogorovSmirnovTest, LaplaceSamplesFitTheirCdf) {
  const std::vector<double> y =
      SampleNoise(Single(Degenerate{1.0}), 100000, 17);
  const double d = KolmogorovSmirnovStatistic(y, [](double x) {
    return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
  });
  EXPECT_THAT(d, Le(1.63 / std::sqrt(static_cast<double>(y.size()))));
}

TEST(KolmogorovSmirnovTest, DetectsWrongScale) {
  const std::vector<double> y =
      SampleNoise(Single(Degenerate{1.0}), 100000, 17);
  const double d = KolmogorovSmirnovStatistic(y, [](double x) {
    return x < 0.0 ? 0.5 * std::exp(2.0 * x) : 1.0 - 0.5 * std::exp(-2.0 * x);
  });
  EXPECT_GT(d, 0.1);
}

TEST(SampleNoiseTest, StreamsAreIndependent) {
  const DistributionSpec spec = Single(Degenerate{1.0});
  const std::vector<double> a = SampleNoise(spec, 1000, 3, 0);
  const std::vector<double> b = SampleNoise(spec, 1000, 3, kVerifyShards);
  ASSERT_THAT(a, SizeIs(1000));
  EXPECT_NE(a, b);
  EXPECT_EQ(a, SampleNoise(spec, 1000, 3, 0));
}

}  // namespace
}  // namespace rdp
