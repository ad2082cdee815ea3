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

#ifndef RDP_SRC_QUADRATURE_H_
#define RDP_SRC_QUADRATURE_H_

#include <functional>

namespace rdp::internal {

struct HalfLineIntegral {
  double value = 0.0;
  bool diverged = false;
  // Local power-law decay exponent of |f| at the last horizon.
  double tail_exponent = 0.0;
};

// Integral of f over [0, inf). The line is cut at doubling horizons starting
// from `scale`; each slab is integrated with adaptive Gauss-Kronrod. The
// tail is declared divergent once |f| decays no faster than x^{-1-0.05}
// across several doublings, and closed analytically once a stable power law
// takes over.
HalfLineIntegral IntegrateHalfLine(const std::function<double(double)>& f,
                                   double scale, double abs_tol);

}  // namespace rdp::internal

#endif  // RDP_SRC_QUADRATURE_H_
