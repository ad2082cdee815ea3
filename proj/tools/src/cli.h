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

#ifndef RDP_TOOLS_CLI_H_
#define RDP_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rdp/distribution.h"
#include "rdp/optimizer.h"

namespace rdp::cli {

enum ExitCode {
  kExitOk = 0,
  kExitOther = 1,
  kExitInput = 2,
  kExitInfeasible = 3,
  kExitVerification = 4,
};

struct SweepOptions {
  double eps_min = 0.1;
  double eps_max = 10.0;
  int steps = 20;
  double delta_q = 1.0;
  double gamma = 1.0;
  Metric metric = Metric::kUsefulness;
  std::vector<FamilyKind> families;
  bool combined = false;
  int restarts = 16;
  uint64_t seed = 0;
  ParameterBounds bounds;
};

struct SweepRow {
  double eps = 0.0;
  double baseline_usefulness = 0.0;
  double optimized_usefulness = 0.0;
  std::string best_family_mix;
  bool necc_holds = false;
  // Present when the winning spec improved on the baseline.
  bool improved = false;
};

inline constexpr char kSweepHeader[] =
    "eps,baseline_usefulness,optimized_usefulness,best_family_mix,necc_holds";

// Linear grid from eps_min to eps_max inclusive. Rows are optimized
// independently, then each row also tries the previous row's winner rescaled
// to its own budget and keeps whichever is better.
absl::StatusOr<std::vector<SweepRow>> RunSweep(const SweepOptions& options);
// best_family_mix is always double-quoted since it contains commas.
std::string SweepCsv(const std::vector<SweepRow>& rows);

// Parses "gamma,uniform", "all" or "combined".
absl::Status ParseFamilies(const std::string& text,
                           std::vector<FamilyKind>* families, bool* combined);

// Applies "name=lo:hi" to the search box. Names: degenerate_k0, bernoulli_x,
// gamma_k, gamma_theta, uniform, trunc_gauss_mu, trunc_gauss_sigma,
// trunc_gauss_bounds, coef0, coef1, ...
absl::Status ApplyBound(const std::string& text, ParameterBounds* bounds);

int ExitCodeFor(const absl::Status& status);

// Entry point shared by the binary and the tests. args[0] is the program
// name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace rdp::cli

#endif  // RDP_TOOLS_CLI_H_
