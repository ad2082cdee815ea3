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

#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace rdp {
namespace {

using ::testing::DoubleNear;
using ::testing::Eq;
using ::testing::Le;

using Wide = boost::multiprecision::cpp_bin_float_50;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Upper normal tail in 50-digit arithmetic.
Wide WideUpperTail(double x) {
  return boost::multiprecision::erfc(Wide(x) / boost::multiprecision::sqrt(Wide(2))) / 2;
}

// Phi(b) - Phi(a), reflected so the subtraction happens in the thin tail.
Wide WideMass(double a, double b) {
  auto tail = [](double x) { return std::isinf(x) ? Wide(x > 0 ? 0 : 1) : WideUpperTail(x); };
  if (b <= 0.0) return tail(-b) - tail(-a);
  return tail(a) - tail(b);
}

double RelativeError(double got, const Wide& want) {
  return static_cast<double>(boost::multiprecision::abs((Wide(got) - want) / want));
}

TEST(GaussianTest, CdfMatchesBoostWithinAbsoluteBound) {
  const boost::math::normal standard;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    EXPECT_THAT(NormalCdf(x), DoubleNear(boost::math::cdf(standard, x), 1e-15)) << x;
    EXPECT_THAT(NormalPdf(x), DoubleNear(boost::math::pdf(standard, x), 1e-15)) << x;
  }
}

TEST(GaussianTest, LogUpperTailMatchesWidePrecision) {
  for (double x = -5.0; x <= 35.0; x += 0.137) {
    const Wide want = boost::multiprecision::log(WideUpperTail(x));
    EXPECT_THAT(RelativeError(LogUpperTail(x), want), Le(1e-13)) << x;
  }
  EXPECT_THAT(LogUpperTail(kInf), Eq(-kInf));
}

TEST(GaussianTest, MillsRatioMatchesWidePrecision) {
  for (double x : {0.0, 0.5, 1.0, 3.9, 4.0, 4.1, 7.0, 20.0, 100.0, 1e4}) {
    const Wide pdf = boost::multiprecision::exp(-Wide(x) * x / 2) /
                     boost::multiprecision::sqrt(2 * boost::math::constants::pi<Wide>());
    const Wide ratio = WideUpperTail(x) / pdf;
    const MillsTerms m = Mills(x);
    EXPECT_THAT(RelativeError(m.ratio, ratio), Le(1e-13)) << x;
    const Wide one_minus = 1 - Wide(x) * ratio;
    EXPECT_THAT(RelativeError(m.one_minus_x_ratio, one_minus), Le(1e-9)) << x;
  }
}

TEST(GaussianTest, InverseLogUpperTailRoundTrips) {
  for (double log_q : {-0.1, -1.0, -10.0, -100.0, -650.0, -700.0, -5000.0}) {
    const double x = InverseLogUpperTail(log_q);
    EXPECT_THAT(LogUpperTail(x), DoubleNear(log_q, 1e-12 * std::abs(log_q))) << log_q;
  }
}

TEST(GaussianTest, LogGaussianMassMatchesWidePrecision) {
  const double cases[][2] = {{-1.0, 1.0}, {0.5, 2.0}, {-3.0, -2.5}, {10.0, 10.5},
                             {-40.0, -39.0}, {3.0, kInf}, {-kInf, -6.0}, {-0.2, 30.0}};
  for (const auto& c : cases) {
    const Wide mass = WideMass(c[0], c[1]);
    EXPECT_THAT(RelativeError(LogGaussianMass(c[0], c[1]), boost::multiprecision::log(mass)),
                Le(1e-12))
        << c[0] << "," << c[1];
  }
}

TEST(GaussianTest, TruncatedMeanMatchesQuadratureFreeIdentity) {
  // E[Z | a < Z < b] = (phi(a) - phi(b)) / (Phi(b) - Phi(a)), evaluated wide.
  const double cases[][2] = {{0.0, kInf}, {-1.0, 1.0}, {1.0, 2.0}, {8.0, 8.001},
                             {-5.0, -4.0}, {20.0, kInf}, {-2.0, 7.0}};
  const Wide root = boost::multiprecision::sqrt(2 * boost::math::constants::pi<Wide>());
  for (const auto& c : cases) {
    auto pdf = [&](double x) {
      return std::isinf(x) ? Wide(0) : boost::multiprecision::exp(-Wide(x) * x / 2) / root;
    };
    const Wide mass = WideMass(c[0], c[1]);
    const Wide mean = (pdf(c[0]) - pdf(c[1])) / mass;
    EXPECT_THAT(TruncatedStandardMean(c[0], c[1]),
                DoubleNear(static_cast<double>(mean), 1e-9 * (1 + std::abs(c[0]))))
        << c[0] << "," << c[1];
  }
  EXPECT_THAT(TruncatedStandardMean(0.0, kInf), DoubleNear(std::sqrt(2.0 / M_PI), 1e-15));
}

}  // namespace
}  // namespace rdp
