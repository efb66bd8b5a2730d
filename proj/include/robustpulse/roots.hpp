// Copyright 2026 The robustpulse Authors
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

#ifndef ROBUSTPULSE_ROOTS_HPP
#define ROBUSTPULSE_ROOTS_HPP

#include <cmath>
#include <limits>
#include <sstream>

#include "robustpulse/errors.hpp"

namespace robustpulse {

struct BisectResult {
  double root = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

/**
 * Bisection for a sign change of f on [lo, hi]. Stops when `done(x, fx)`
 * accepts the midpoint or the bracket collapses to a few ulps.
 */
template <class F, class Done>
BisectResult bisect(F&& f, double lo, double hi, Done&& done, int max_iterations = 400) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, lo, lo, 0};
  if (f_hi == 0.0) return {hi, hi, hi, 0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg << "bisect: no sign change on [" << lo << ", " << hi << "] (f = " << f_lo << ", " << f_hi
        << ")";
    throw ConvergenceError(msg.str());
  }
  for (int it = 1; it <= max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return {mid, lo, hi, it};
    const double f_mid = f(mid);
    if (f_mid == 0.0 || done(mid, f_mid)) return {mid, lo, hi, it};
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) {
      return {0.5 * (lo + hi), lo, hi, it};
    }
  }
  throw ConvergenceError("bisect: iteration limit reached");
}

template <class F>
BisectResult bisect(F&& f, double lo, double hi) {
  return bisect(f, lo, hi, [](double, double) { return false; });
}

/// Doubles `hi` until f changes sign against f(lo); gives up past `limit`.
template <class F>
double expand_upper_bracket(F&& f, double lo, double hi, double limit) {
  const bool lo_positive = f(lo) > 0.0;
  while (hi <= limit) {
    if ((f(hi) > 0.0) != lo_positive) return hi;
    hi *= 2.0;
  }
  std::ostringstream msg;
  msg << "expand_upper_bracket: no sign change below " << limit;
  throw ConvergenceError(msg.str());
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_ROOTS_HPP
