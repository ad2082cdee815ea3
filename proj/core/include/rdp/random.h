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

#ifndef RDP_RANDOM_H_
#define RDP_RANDOM_H_

#include <cstdint>
#include <optional>
#include <random>

namespace rdp {

// Seedable bit generator used by every sampler in the library. Only the
// engine's raw 64-bit output is consumed, so draws are reproducible across
// standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Independent stream derived from (seed, stream). Used for per-release and
  // per-shard randomness so that parallel work stays reproducible.
  static Rng ForStream(uint64_t seed, uint64_t stream);

  uint64_t NextBits() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double Uniform();

  // Standard normal via the Marsaglia polar method.
  double StandardNormal();

  // Exponential with unit mean.
  double Exponential();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

// SplitMix64 finalizer; exposed for seed derivation in callers.
uint64_t MixSeed(uint64_t x);

}  // namespace rdp

#endif  // RDP_RANDOM_H_
