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

// JSON forms of specs and reports.
//
// A spec is {"terms": [{"coef": 0.6, "family": {"gamma": {"k": 2,
// "theta": 0.5}}}, ...]}. A bare family object such as
// {"uniform": {"a": 1, "b": 2}} is accepted as a single term with
// coefficient 1. Family keys: degenerate{k0}, bernoulli{p, x0, x1},
// gamma{k, theta}, uniform{a, b}, trunc_gauss{mu, sigma, lo, hi}, where hi
// may be the string "inf". Non-finite report values are written as the
// strings "inf", "-inf" or "nan".

#ifndef RDP_JSON_IO_H_
#define RDP_JSON_IO_H_

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "rdp/distribution.h"
#include "rdp/mechanism.h"
#include "rdp/optimizer.h"
#include "rdp/privacy.h"
#include "rdp/utility.h"
#include "rdp/verify.h"

namespace rdp {

nlohmann::json SpecToJson(const DistributionSpec& spec);
// Errors carry the path of the offending field, e.g.
// "terms[0].family.gamma.theta: must be a number".
absl::StatusOr<DistributionSpec> SpecFromJson(const nlohmann::json& json);
absl::StatusOr<DistributionSpec> ParseSpec(std::string_view text);
absl::StatusOr<DistributionSpec> LoadSpecFile(const std::string& path);

// "0.6*gamma(k=2,theta=0.5)+0.4*uniform(a=1,b=2)" with %.6g numbers.
std::string CompactSpecString(const DistributionSpec& spec);

nlohmann::json ToJson(const PrivacyReport& report);
nlohmann::json ToJson(const UtilityReport& report);
nlohmann::json ToJson(const OptimizationResult& result);
nlohmann::json ToJson(const VerificationReport& report);
nlohmann::json ToJson(const MetricCheck& check);
// {noisy_value, eps_certified, spec_used, seed}. The true value is never
// included.
nlohmann::json ReleaseToJson(const ReleaseRecord& record);

}  // namespace rdp

#endif  // RDP_JSON_IO_H_
