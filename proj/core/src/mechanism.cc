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

#include "rdp/mechanism.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rdp/privacy.h"

namespace rdp {
namespace {

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return absl::StrFormat("%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                         tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                         tm.tm_sec);
}

absl::Status ValidateQuery(const Query& query) {
  if (query.kind == QueryKind::kCount) return absl::OkStatus();
  if (!(std::isfinite(query.clip_lo) && std::isfinite(query.clip_hi) &&
        query.clip_lo < query.clip_hi)) {
    return absl::InvalidArgumentError("clip range must satisfy lo < hi");
  }
  return absl::OkStatus();
}

struct Resolved {
  DistributionSpec spec;
  double true_value;
  double sensitivity;
  double eps_certified;
};

absl::StatusOr<Resolved> Resolve(const QueryJob& job) {
  if (job.data == nullptr) return absl::InvalidArgumentError("no dataset");
  if (!(std::isfinite(job.eps_target) && job.eps_target > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(std::isfinite(job.gamma) && job.gamma > 0.0)) {
    return absl::InvalidArgumentError("gamma must be positive");
  }
  absl::StatusOr<double> dq = Sensitivity(job.query, job.data->size());
  if (!dq.ok()) return dq.status();
  absl::StatusOr<double> value = EvaluateQuery(job.query, *job.data);
  if (!value.ok()) return value.status();

  std::optional<DistributionSpec> spec = job.spec_override;
  if (!spec.has_value()) {
    OptimizationProblem problem = job.search;
    problem.eps_target = job.eps_target;
    problem.delta_q = *dq;
    problem.gamma = job.gamma;
    problem.metric = job.metric;
    problem.seed = job.seed;
    absl::StatusOr<OptimizationResult> result = Optimize(problem);
    if (!result.ok()) return result.status();
    spec = result->best_spec;
  }
  absl::StatusOr<double> eps = EpsGeneral(*spec, *dq);
  if (!eps.ok()) return eps.status();
  return Resolved{*std::move(spec), *value, *dq, *eps};
}

ReleaseRecord Draw(const Resolved& r, uint64_t seed, uint64_t index) {
  Rng rng = Rng::ForStream(seed, index);
  const NoiseDraw draw = SampleCompoundLaplace(r.spec, rng);
  return ReleaseRecord{
      .true_value = r.true_value,
      .noisy_value = r.true_value + draw.noise,
      .spec_used = r.spec,
      .eps_certified = r.eps_certified,
      .b_r_drawn = 1.0 / draw.inv_b,
      .sensitivity = r.sensitivity,
      .seed = seed,
      .release_index = index,
      .timestamp = UtcTimestamp(),
  };
}

}  // namespace

std::string_view QueryName(QueryKind kind) {
  switch (kind) {
    case QueryKind::kCount:
      return "count";
    case QueryKind::kSum:
      return "sum";
    case QueryKind::kMean:
      return "mean";
  }
  return "unknown";
}

absl::StatusOr<QueryKind> ParseQueryKind(std::string_view name) {
  for (QueryKind k : {QueryKind::kCount, QueryKind::kSum, QueryKind::kMean}) {
    if (QueryName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown query '", std::string(name), "'"));
}

absl::StatusOr<double> Sensitivity(const Query& query, size_t n) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  switch (query.kind) {
    case QueryKind::kCount:
      return 1.0;
    case QueryKind::kSum:
      return query.clip_hi - query.clip_lo;
    case QueryKind::kMean:
      if (n == 0) {
        return absl::InvalidArgumentError("mean query on an empty dataset");
      }
      return (query.clip_hi - query.clip_lo) / static_cast<double>(n);
  }
  return absl::InvalidArgumentError("unknown query");
}

absl::StatusOr<double> EvaluateQuery(const Query& query, const Dataset& data) {
  if (absl::Status s = ValidateQuery(query); !s.ok()) return s;
  if (query.kind == QueryKind::kCount) {
    return static_cast<double>(data.size());
  }
  if (query.kind == QueryKind::kMean && data.size() == 0) {
    return absl::InvalidArgumentError("mean query on an empty dataset");
  }
  double sum = 0.0;
  for (double v : data.values()) {
    sum += std::clamp(v, query.clip_lo, query.clip_hi);
  }
  if (query.kind == QueryKind::kSum) return sum;
  return sum / static_cast<double>(data.size());
}

NoiseDraw SampleCompoundLaplace(const DistributionSpec& spec, Rng& rng) {
  const double inv_b = SampleInvB(spec, rng);
  const double magnitude = rng.Exponential() / inv_b;
  const double noise = (rng.NextBits() & 1) ? magnitude : -magnitude;
  return {inv_b, noise};
}

absl::StatusOr<ReleaseRecord> Release(const QueryJob& job,
                                      uint64_t release_index) {
  absl::StatusOr<Resolved> resolved = Resolve(job);
  if (!resolved.ok()) return resolved.status();
  return Draw(*resolved, job.seed, release_index);
}

absl::StatusOr<std::vector<ReleaseRecord>> ReleaseBatch(const QueryJob& job,
                                                        int count) {
  if (count < 0) return absl::InvalidArgumentError("count must be >= 0");
  absl::StatusOr<Resolved> resolved = Resolve(job);
  if (!resolved.ok()) return resolved.status();
  std::vector<ReleaseRecord> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(Draw(*resolved, job.seed, static_cast<uint64_t>(i)));
  }
  return out;
}

}  // namespace rdp
