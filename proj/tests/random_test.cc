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

#include "rdp/random.h"

#include <cmath>
#include <cstdint>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace rdp {
namespace {

using ::testing::DoubleNear;
using ::testing::Eq;
using ::testing::Gt;
using ::testing::Lt;
using ::testing::Ne;

constexpr int kNumSamples = 1000000;

TEST(RngTest, SameSeedReproducesSequence) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_THAT(a.NextBits(), Eq(b.NextBits()));
  }
}

TEST(RngTest, StreamsDiffer) {
  std::set<uint64_t> first_words;
  for (uint64_t stream = 0; stream < 100; ++stream) {
    first_words.insert(Rng::ForStream(7, stream).NextBits());
  }
  EXPECT_THAT(first_words.size(), Eq(100u));
  EXPECT_THAT(Rng::ForStream(7, 0).NextBits(),
              Ne(Rng::ForStream(8, 0).NextBits()));
}

TEST(RngTest, UniformStaysInOpenInterval) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < kNumSamples; ++i) {
    const double u = rng.Uniform();
    ASSERT_THAT(u, Gt(0.0));
    ASSERT_THAT(u, Lt(1.0));
    sum += u;
  }
  // Standard error of the mean is sqrt(1/12 / N).
  EXPECT_THAT(sum / kNumSamples, DoubleNear(0.5, 4.0 * std::sqrt(1.0 / 12.0 / kNumSamples)));
}

TEST(RngTest, StandardNormalMoments) {
  Rng rng(2);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kNumSamples; ++i) {
    const double z = rng.StandardNormal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_THAT(sum / kNumSamples, DoubleNear(0.0, 4.0 / std::sqrt(kNumSamples)));
  // Var(Z^2) = 2.
  EXPECT_THAT(sum_sq / kNumSamples,
              DoubleNear(1.0, 4.0 * std::sqrt(2.0 / kNumSamples)));
}

TEST(RngTest, ExponentialMoments) {
  Rng rng(3);
  double sum = 0.0;
  double tail = 0.0;
  for (int i = 0; i < kNumSamples; ++i) {
    const double e = rng.Exponential();
    ASSERT_THAT(e, Gt(0.0));
    sum += e;
    tail += e > 2.0 ? 1.0 : 0.0;
  }
  EXPECT_THAT(sum / kNumSamples, DoubleNear(1.0, 4.0 / std::sqrt(kNumSamples)));
  const double p = std::exp(-2.0);
  EXPECT_THAT(tail / kNumSamples,
              DoubleNear(p, 4.0 * std::sqrt(p * (1 - p) / kNumSamples)));
}

TEST(MixSeedTest, IsBijectiveOnSample) {
  std::set<uint64_t> out;
  for (uint64_t i = 0; i < 10000; ++i) out.insert(MixSeed(i));
  EXPECT_THAT(out.size(), Eq(10000u));
}

}  // namespace
}  // namespace rdp
