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

#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "rdp/distribution.h"
#include "rdp/optimizer.h"
#include "rdp/privacy.h"
#include "rdp/utility.h"
#include "rdp/verify.h"

namespace rdp {
namespace {

DistributionSpec Combined() {
  return *DistributionSpec::Create({{0.5, Gamma{2.0, 0.5}},
                                    {0.3, Uniform{1.0, 2.0}},
                                    {0.2, TruncGauss{1.0, 0.5, 0.2, 4.0}}});
}

void BM_EpsGeneralGamma(benchmark::State& state) {
  const DistributionSpec spec = *DistributionSpec::Of(Gamma{2.0, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(EpsGeneral(spec, 1.0));
}
BENCHMARK(BM_EpsGeneralGamma);

void BM_EpsGeneralCombined(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  for (auto _ : state) benchmark::DoNotOptimize(EpsGeneral(spec, 1.0));
}
BENCHMARK(BM_EpsGeneralCombined);

void BM_UsefulnessCombined(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  for (auto _ : state) benchmark::DoNotOptimize(Usefulness(spec, 1.0));
}
BENCHMARK(BM_UsefulnessCombined);

void BM_L1ErrorCombined(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  for (auto _ : state) benchmark::DoNotOptimize(L1Error(spec));
}
BENCHMARK(BM_L1ErrorCombined);

void BM_EntropyTableCombined(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  for (auto _ : state) benchmark::DoNotOptimize(EntropyTable(spec));
}
BENCHMARK(BM_EntropyTableCombined);

void BM_NoisePdfCombined(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(NoisePdf(spec, x));
    x = x > 3.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(BM_NoisePdfCombined);

void BM_SampleNoise(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  const int64_t n = state.range(0);
  uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(SampleNoise(spec, n, ++seed));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleNoise)->Arg(1 << 16);

void BM_CertifyPrivacyGrid(benchmark::State& state) {
  const DistributionSpec spec = Combined();
  for (auto _ : state) {
    benchmark::DoNotOptimize(CertifyPrivacy(spec, 1.0, 5.0));
  }
}
BENCHMARK(BM_CertifyPrivacyGrid)->Unit(benchmark::kMillisecond);

void BM_OptimizeGamma(benchmark::State& state) {
  OptimizationProblem problem;
  problem.eps_target = 2.0;
  problem.gamma = 0.1;
  problem.families = {FamilyKind::kGamma};
  problem.restarts = static_cast<int>(state.range(0));
  problem.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Optimize(problem));
}
BENCHMARK(BM_OptimizeGamma)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_OptimizeCombined(benchmark::State& state) {
  OptimizationProblem problem;
  problem.eps_target = 2.0;
  problem.gamma = 0.1;
  problem.families = {FamilyKind::kGamma, FamilyKind::kUniform,
                      FamilyKind::kTruncGauss};
  problem.combined = true;
  problem.restarts = 8;
  problem.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Optimize(problem));
}
BENCHMARK(BM_OptimizeCombined)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rdp

BENCHMARK_MAIN();
