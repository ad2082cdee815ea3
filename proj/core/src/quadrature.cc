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

#include "quadrature.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rdp::internal {
namespace {

constexpr double kDivergenceSlack = 0.05;
constexpr int kMinDoublings = 10;
constexpr int kMaxDoublings = 1000;

double Slab(const std::function<double(double)>& f, double a, double b,
            double rel_tol) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 12, rel_tol);
}

}  // namespace

HalfLineIntegral IntegrateHalfLine(const std::function<double(double)>& f,
                                   double scale, double abs_tol) {
  const double rel_tol = std::max(abs_tol, 1e-13);
  HalfLineIntegral result;
  double horizon = scale / 16.0;
  double total = Slab(f, 0.0, horizon, rel_tol);
  double g_prev = std::abs(f(horizon));
  double p_prev = std::numeric_limits<double>::quiet_NaN();

  for (int i = 0; i < kMaxDoublings; ++i) {
    const double next = 2.0 * horizon;
    if (!std::isfinite(next)) break;
    const double piece = Slab(f, horizon, next, rel_tol);
    total += piece;
    const double g = std::abs(f(next));
    const double tol = std::max(abs_tol, 1e-13 * std::abs(total));
    if (g == 0.0 && std::abs(piece) <= tol) {
      result.value = total;
      result.tail_exponent = std::numeric_limits<double>::infinity();
      return result;
    }
    const double p = (g_prev > 0.0 && g > 0.0)
                         ? std::log2(g_prev / g)
                         : std::numeric_limits<double>::infinity();
    result.tail_exponent = p;
    const double tail = p > 1.0 ? g * next / (p - 1.0)
                                : std::numeric_limits<double>::infinity();
    if (tail <= tol && std::abs(piece) <= tol) {
      result.value = total;
      return result;
    }
    if (i >= kMinDoublings) {
      if (p <= 1.0 + kDivergenceSlack) {
        result.diverged = true;
        result.value = std::numeric_limits<double>::infinity();
        return result;
      }
      // Pure power-law tail: close it analytically.
      if (std::abs(p - p_prev) < 1e-5 && i >= 2 * kMinDoublings) {
        result.value = total + std::copysign(tail, piece);
        return result;
      }
    }
    p_prev = p;
    g_prev = g;
    horizon = next;
  }
  result.diverged = true;
  result.value = std::numeric_limits<double>::infinity();
  return result;
}

}  // namespace rdp::internal
