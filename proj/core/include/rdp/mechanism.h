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

// Release of a scalar query answer through the compound Laplace mechanism.
// Each release draws its own 1/b from the spec and then one Laplace variate
// of scale b; nothing is cached between releases.

#ifndef RDP_MECHANISM_H_
#define RDP_MECHANISM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rdp/dataset.h"
#include "rdp/distribution.h"
#include "rdp/optimizer.h"
#include "rdp/random.h"

namespace rdp {

enum class QueryKind { kCount, kSum, kMean };

struct Query {
  QueryKind kind = QueryKind::kCount;
  // Values are clamped into [clip_lo, clip_hi] before aggregation.
  double clip_lo = 0.0;
  double clip_hi = 0.0;

  static Query Count() { return {QueryKind::kCount, 0.0, 0.0}; }
  static Query Sum(double lo, double hi) { return {QueryKind::kSum, lo, hi}; }
  static Query Mean(double lo, double hi) {
    return {QueryKind::kMean, lo, hi};
  }
};

std::string_view QueryName(QueryKind kind);
absl::StatusOr<QueryKind> ParseQueryKind(std::string_view name);

// count: 1; sum: clip_hi - clip_lo; mean: (clip_hi - clip_lo) / n.
absl::StatusOr<double> Sensitivity(const Query& query, size_t n);
absl::StatusOr<double> EvaluateQuery(const Query& query, const Dataset& data);

struct QueryJob {
  const Dataset* data = nullptr;
  Query query;
  double eps_target = 1.0;
  double gamma = 1.0;
  Metric metric = Metric::kUsefulness;
  uint64_t seed = 0;
  std::optional<DistributionSpec> spec_override;
  // Search settings used when no override is given. eps_target, delta_q,
  // gamma, metric and seed are filled in from the job.
  OptimizationProblem search;
};

struct ReleaseRecord {
  // The protected quantity. Never printed by the command-line tools.
  double true_value = 0.0;
  double noisy_value = 0.0;
  DistributionSpec spec_used;
  double eps_certified = 0.0;
  double b_r_drawn = 0.0;
  double sensitivity = 0.0;
  uint64_t seed = 0;
  uint64_t release_index = 0;
  // UTC, ISO 8601.
  std::string timestamp;
};

struct NoiseDraw {
  double inv_b;
  double noise;
};

// 1/b from the spec, then Laplace(b).
NoiseDraw SampleCompoundLaplace(const DistributionSpec& spec, Rng& rng);

// The randomness of release i comes from Rng::ForStream(seed, i).
absl::StatusOr<ReleaseRecord> Release(const QueryJob& job,
                                      uint64_t release_index = 0);

// Releases 0..count-1 of the same job; the spec is resolved once.
absl::StatusOr<std::vector<ReleaseRecord>> ReleaseBatch(const QueryJob& job,
                                                        int count);

}  // namespace rdp

#endif  // RDP_MECHANISM_H_
