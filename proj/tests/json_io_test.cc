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

#include "rdp/json_io.h"

#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "rdp/distribution.h"
#include "rdp/mechanism.h"
#include "rdp/privacy.h"
#include "rdp/utility.h"
#include "test_support.h"

namespace rdp {
namespace {

using ::nlohmann::json;
using ::rdp::testutil::Generator;
using ::rdp::testutil::Mix;
using ::rdp::testutil::Single;
using ::testing::DoubleNear;
using ::testing::Eq;
using ::testing::HasSubstr;
using ::testing::IsTrue;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Message(const absl::Status& status) {
  return std::string(status.message());
}

TEST(SpecJsonTest, ParsesTermList) {
  RDP_ASSERT_OK_AND_ASSIGN(
      DistributionSpec spec,
      ParseSpec(R"({"terms": [{"coef": 0.6, "family": {"gamma": {"k": 2,
                   "theta": 0.5}}}, {"coef": 0.4, "family": {"uniform":
                   {"a": 1, "b": 2}}}]})"));
  ASSERT_THAT(spec.terms().size(), Eq(2u));
  EXPECT_THAT(spec.terms()[0].coef, Eq(0.6));
  const Gamma& g = std::get<Gamma>(spec.terms()[0].family);
  EXPECT_THAT(g.k, Eq(2.0));
  EXPECT_THAT(g.theta, Eq(0.5));
  const Uniform& u = std::get<Uniform>(spec.terms()[1].family);
  EXPECT_THAT(u.b, Eq(2.0));
}

TEST(SpecJsonTest, BareFamilyIsSingleTerm) {
  RDP_ASSERT_OK_AND_ASSIGN(DistributionSpec spec,
                           ParseSpec(R"({"uniform": {"a": 1, "b": 2}})"));
  ASSERT_THAT(spec.terms().size(), Eq(1u));
  EXPECT_THAT(spec.terms()[0].coef, Eq(1.0));
}

TEST(SpecJsonTest, CoefficientDefaultsToOne) {
  RDP_ASSERT_OK_AND_ASSIGN(
      DistributionSpec spec,
      ParseSpec(R"({"terms": [{"family": {"degenerate": {"k0": 2}}}]})"));
  EXPECT_THAT(spec.terms()[0].coef, Eq(1.0));
}

TEST(SpecJsonTest, InfiniteUpperBound) {
  RDP_ASSERT_OK_AND_ASSIGN(
      DistributionSpec spec,
      ParseSpec(R"({"trunc_gauss": {"mu": 1, "sigma": 2, "lo": 0.5,
                   "hi": "inf"}})"));
  EXPECT_THAT(std::get<TruncGauss>(spec.terms()[0].family).hi, Eq(kInf));
  const json out = SpecToJson(spec);
  EXPECT_THAT(out["terms"][0]["family"]["trunc_gauss"]["hi"], Eq(json("inf")));
}

TEST(SpecJsonTest, RoundTripIsExact) {
  Generator gen(31);
  for (int i = 0; i < 200; ++i) {
    const DistributionSpec spec = gen.Spec();
    const std::string text = SpecToJson(spec).dump();
    RDP_ASSERT_OK_AND_ASSIGN(DistributionSpec back, ParseSpec(text));
    EXPECT_THAT(SpecToJson(back).dump(), Eq(text));
    EXPECT_THAT(LogMgf(back, -0.7), Eq(LogMgf(spec, -0.7)));
  }
}

TEST(SpecJsonTest, ErrorsNameTheField) {
  EXPECT_THAT(
      Message(ParseSpec(R"({"terms": [{"coef": 1, "family": {"gamma":
                           {"k": 2, "theta": "x"}}}]})")
                  .status()),
      HasSubstr("terms[0].family.gamma.theta: must be a number"));
  EXPECT_THAT(Message(ParseSpec(R"({"gamma": {"k": 2}})").status()),
              HasSubstr("$.gamma.theta: missing"));
  EXPECT_THAT(Message(ParseSpec(R"({"gamma": {"k": 2, "theta": 1,
                                   "z": 3}})")
                          .status()),
              HasSubstr("$.gamma.z: unknown field"));
  EXPECT_THAT(Message(ParseSpec(R"({"cauchy": {"x": 1}})").status()),
              HasSubstr("unknown family"));
  EXPECT_THAT(Message(ParseSpec(R"({"terms": []})").status()),
              HasSubstr("terms: must not be empty"));
  EXPECT_THAT(Message(ParseSpec(R"({"terms": [{"coef": "a", "family":
                                   {"degenerate": {"k0": 1}}}]})")
                          .status()),
              HasSubstr("terms[0].coef"));
  EXPECT_THAT(Message(ParseSpec("{").status()), HasSubstr("not valid JSON"));
}

TEST(SpecJsonTest, InvalidParametersAreRejected) {
  const absl::Status status =
      ParseSpec(R"({"terms": [{"coef": 1, "family": {"gamma": {"k": -1,
                   "theta": 1}}}]})")
          .status();
  EXPECT_FALSE(status.ok());
  EXPECT_THAT(Message(status), HasSubstr("terms[0].family"));
}

TEST(SpecJsonTest, MissingFileIsNotFound) {
  EXPECT_THAT(LoadSpecFile("/nonexistent/spec.json").status().code(),
              Eq(absl::StatusCode::kNotFound));
}

TEST(CompactSpecStringTest, Format) {
  const DistributionSpec spec =
      Mix({{0.6, Gamma{2.0, 0.5}}, {0.4, Uniform{1.0, 2.0}}});
  EXPECT_THAT(CompactSpecString(spec),
              Eq("0.6*gamma(k=2,theta=0.5)+0.4*uniform(a=1,b=2)"));
  EXPECT_THAT(CompactSpecString(Single(TruncGauss{0.0, 1.0, 0.5, kInf})),
              Eq("1*trunc_gauss(mu=0,sigma=1,lo=0.5,hi=inf)"));
}

TEST(ReportJsonTest, PrivacyReportFields) {
  RDP_ASSERT_OK_AND_ASSIGN(PrivacyReport report,
                           AnalyzePrivacy(Single(Gamma{2.0, 0.5}), 1.0));
  const json out = ToJson(report);
  EXPECT_THAT(out["eps_general"].get<double>(), DoubleNear(1.216395, 1e-6));
  EXPECT_THAT(out.contains("necessary_condition"), IsTrue());
}

TEST(ReportJsonTest, DivergentMomentIsNull) {
  RDP_ASSERT_OK_AND_ASSIGN(UtilityReport report,
                           AnalyzeUtility(Single(Gamma{2.0, 0.5}), 1.0));
  const json out = ToJson(report);
  EXPECT_THAT(out["l2"].is_null(), IsTrue());
  EXPECT_THAT(out["l1"].get<double>(), DoubleNear(2.0, 1e-8));
}

TEST(ReportJsonTest, NonFiniteValuesAreStrings) {
  MetricCheck check;
  check.name = "x";
  check.analytic = kInf;
  check.oracle = std::nan("");
  const json out = ToJson(check);
  EXPECT_THAT(out["analytic"], Eq(json("inf")));
  EXPECT_THAT(out["oracle"], Eq(json("nan")));
  EXPECT_THAT(out.contains("note"), testing::IsFalse());
}

TEST(ReleaseJsonTest, OmitsTrueValue) {
  ReleaseRecord record{.true_value = 123.456,
                       .noisy_value = 124.0,
                       .spec_used = Single(Degenerate{1.0})};
  record.eps_certified = 1.0;
  record.seed = 9;
  const json out = ReleaseToJson(record);
  EXPECT_THAT(out.contains("true_value"), testing::IsFalse());
  EXPECT_THAT(out.dump(), testing::Not(HasSubstr("123.456")));
  EXPECT_THAT(out["noisy_value"].get<double>(), Eq(124.0));
  EXPECT_THAT(out["seed"].get<uint64_t>(), Eq(9u));
}

}  // namespace
}  // namespace rdp
