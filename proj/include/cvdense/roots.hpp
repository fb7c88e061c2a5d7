// Copyright 2026 The cvdense Authors
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

#pragma once

#include <cmath>
#include <sstream>

#include "cvdense/errors.hpp"

namespace cvdense {

/// Bracketing root finder: Illinois-modified regula falsi, falling back to a
/// bisection step whenever the secant step fails to shrink the bracket by half.
/// Terminates when the bracket is narrower than `x_tol`.
template <class F>
double find_root(F&& f, double lo, double hi, double x_tol = 1e-6, int max_iter = 200) {
  detail::require(lo < hi, "find_root: bracket must satisfy lo < hi");
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]: f(lo)=" << f_lo << ", f(hi)=" << f_hi;
    throw NoSignChange(msg.str());
  }
  int stale_side = 0;
  for (int iter = 0; iter < max_iter && hi - lo > x_tol; ++iter) {
    const double width = hi - lo;
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = fx;
      if (stale_side == 1) f_hi *= 0.5;
      stale_side = 1;
    } else {
      hi = x;
      f_hi = fx;
      if (stale_side == -1) f_lo *= 0.5;
      stale_side = -1;
    }
    if (hi - lo > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if (std::signbit(fm) == std::signbit(f_lo)) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
        f_hi = fm;
      }
      stale_side = 0;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cvdense
