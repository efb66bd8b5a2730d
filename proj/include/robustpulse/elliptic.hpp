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

#ifndef ROBUSTPULSE_ELLIPTIC_HPP
#define ROBUSTPULSE_ELLIPTIC_HPP

/**
 * @file elliptic.hpp
 * @brief The elliptic-type quadratures that parameterize NOT-gate extremals.
 *
 * With s = sin(x):
 *
 *   I(k) = int_0^{pi/2} 1 / sqrt(k + s) dx           k >= 0
 *   J(k) = int_0^{pi/2} s / sqrt(k + s) dx           k >= 0
 *   A(k) = int_{-asin k}^0 1 / sqrt(k + s) dx        0 <= k < 1
 *   B(k) = int_{-asin k}^0 s / sqrt(k + s) dx        0 <= k < 1
 *
 * and the switch families (m >= 1)
 *
 *   I_m  = 2m A + (2m-1) I,   J_m  = 2m B + (2m-1) J    (u(0) < 0)
 *   I_+m = 2m A + (2m+1) I,   J_+m = 2m B + (2m+1) J    (u(0) >= 0).
 *
 * Every integrand handed to the quadrature is bounded:
 *   - I and J are integrated in t with x = t^2, so 2t / sqrt(k + sin t^2)
 *     stays finite at k = 0;
 *   - A and B use the closed-interval forms
 *       A(k) =  sqrt(k)   int_0^{pi/2} sqrt(1+s) / sqrt(1 - k^2 s^2) dx
 *       B(k) = -k sqrt(k) int_0^{pi/2} s sqrt(1+s) / sqrt(1 - k^2 s^2) dx.
 */

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "robustpulse/errors.hpp"
#include "robustpulse/quadrature.hpp"

namespace robustpulse {

enum class KernelKind { I, J, A, B, Im, Jm, Ipm, Jpm };

/// Which switch family: `minus` for u(0) < 0, `plus` for u(0) >= 0.
enum class SwitchFamily { minus, plus };

struct QuadKernel {
  KernelKind kind = KernelKind::I;
  int m = 0;  // only meaningful for Im/Jm/Ipm/Jpm
  double k = 0.0;

  void validate() const;
};

namespace detail {

inline double half_pi() { return 0.5 * std::numbers::pi; }

inline void require_nonnegative(double k, const char* what) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    std::ostringstream msg;
    msg << what << ": k must be finite and >= 0, got " << k;
    throw DomainError(msg.str());
  }
}

inline void require_unit(double k, const char* what) {
  if (!(k >= 0.0 && k < 1.0)) {
    std::ostringstream msg;
    msg << what << ": k must lie in [0, 1), got " << k;
    throw DomainError(msg.str());
  }
}

// Integrates over t in [0, sqrt(pi/2)]. For small k the integrand turns over
// at t ~ sqrt(k) and relaxes like k / t^2 after that, features the first
// panels can step over entirely, so the range is cut geometrically from
// sqrt(k) outwards.
template <class F>
double integrate_split(F& f, double k, const QuadConfig& cfg) {
  const double end = std::sqrt(half_pi());
  double a = std::sqrt(k);
  if (k == 0.0 || a >= 0.125 * end) return integrate_adaptive(f, 0.0, end, cfg).value;
  double sum = integrate_adaptive(f, 0.0, a, cfg).value;
  while (a < end) {
    const double b = std::min(end, 8.0 * a);
    sum += integrate_adaptive(f, a, b, cfg).value;
    a = b;
  }
  return sum;
}

}  // namespace detail

inline double eval_I(double k, const QuadConfig& cfg = {}) {
  detail::require_nonnegative(k, "eval_I");
  auto integrand = [k](double t) {
    if (t == 0.0) return k == 0.0 ? 2.0 : 0.0;
    return 2.0 * t / std::sqrt(k + std::sin(t * t));
  };
  return detail::integrate_split(integrand, k, cfg);
}

inline double eval_J(double k, const QuadConfig& cfg = {}) {
  detail::require_nonnegative(k, "eval_J");
  auto integrand = [k](double t) {
    const double s = std::sin(t * t);
    if (s == 0.0) return 0.0;
    return 2.0 * t * s / std::sqrt(k + s);
  };
  return detail::integrate_split(integrand, k, cfg);
}

inline double eval_A(double k, const QuadConfig& cfg = {}) {
  detail::require_unit(k, "eval_A");
  if (k == 0.0) return 0.0;
  const double k2 = k * k;
  auto integrand = [k2](double x) {
    const double s = std::sin(x);
    return std::sqrt(1.0 + s) / std::sqrt(1.0 - k2 * s * s);
  };
  return std::sqrt(k) * integrate_adaptive(integrand, 0.0, detail::half_pi(), cfg).value;
}

inline double eval_B(double k, const QuadConfig& cfg = {}) {
  detail::require_unit(k, "eval_B");
  if (k == 0.0) return 0.0;
  const double k2 = k * k;
  auto integrand = [k2](double x) {
    const double s = std::sin(x);
    return s * std::sqrt(1.0 + s) / std::sqrt(1.0 - k2 * s * s);
  };
  return -k * std::sqrt(k) * integrate_adaptive(integrand, 0.0, detail::half_pi(), cfg).value;
}

/// (I_m, J_m) for the minus family, (I_+m, J_+m) for the plus family.
inline std::pair<double, double> eval_Im_Jm(double k, int m, SwitchFamily family,
                                            const QuadConfig& cfg = {}) {
  detail::require_unit(k, "eval_Im_Jm");
  if (m < 1) throw DomainError("eval_Im_Jm: m must be >= 1");
  const double weight_ab = 2.0 * m;
  const double weight_ij = family == SwitchFamily::minus ? 2.0 * m - 1.0 : 2.0 * m + 1.0;
  const double a = eval_A(k, cfg);
  const double b = eval_B(k, cfg);
  const double i = eval_I(k, cfg);
  const double j = eval_J(k, cfg);
  return {weight_ab * a + weight_ij * i, weight_ab * b + weight_ij * j};
}

/// I_1 and J_1, the one-pair-switch kernels.
inline std::pair<double, double> eval_I1_J1(double k, const QuadConfig& cfg = {}) {
  return eval_Im_Jm(k, 1, SwitchFamily::minus, cfg);
}

/**
 * F(k) = int_0^{pi/2} (8 - 3 s (3 - k^2 s^2)) sqrt(1+s) / (1 - k^2 s^2)^{3/2} dx.
 *
 * Up to the positive factor sqrt(k)/2 this is 3B' + 2A + 4kA'. F > 0 makes the
 * switch-family costs C_m(k) nondecreasing wherever J_m(k) >= 0; past the
 * zero of J_m the algebraic C_m does turn down as k -> 1.
 */
inline double eval_cost_slope_kernel(double k, const QuadConfig& cfg = {}) {
  detail::require_unit(k, "eval_cost_slope_kernel");
  const double k2 = k * k;
  auto integrand = [k2](double x) {
    const double s = std::sin(x);
    const double w = 1.0 - k2 * s * s;
    return (8.0 - 3.0 * s * (3.0 - k2 * s * s)) * std::sqrt(1.0 + s) / (w * std::sqrt(w));
  };
  return integrate_adaptive(integrand, 0.0, detail::half_pi(), cfg).value;
}

inline void QuadKernel::validate() const {
  switch (kind) {
    case KernelKind::I:
    case KernelKind::J:
      detail::require_nonnegative(k, "QuadKernel");
      break;
    case KernelKind::Im:
    case KernelKind::Jm:
    case KernelKind::Ipm:
    case KernelKind::Jpm:
      if (m < 1) throw DomainError("QuadKernel: m must be >= 1");
      [[fallthrough]];
    case KernelKind::A:
    case KernelKind::B:
      detail::require_unit(k, "QuadKernel");
      break;
  }
}

inline double evaluate(const QuadKernel& kernel, const QuadConfig& cfg = {}) {
  kernel.validate();
  switch (kernel.kind) {
    case KernelKind::I:
      return eval_I(kernel.k, cfg);
    case KernelKind::J:
      return eval_J(kernel.k, cfg);
    case KernelKind::A:
      return eval_A(kernel.k, cfg);
    case KernelKind::B:
      return eval_B(kernel.k, cfg);
    case KernelKind::Im:
      return eval_Im_Jm(kernel.k, kernel.m, SwitchFamily::minus, cfg).first;
    case KernelKind::Jm:
      return eval_Im_Jm(kernel.k, kernel.m, SwitchFamily::minus, cfg).second;
    case KernelKind::Ipm:
      return eval_Im_Jm(kernel.k, kernel.m, SwitchFamily::plus, cfg).first;
    case KernelKind::Jpm:
      return eval_Im_Jm(kernel.k, kernel.m, SwitchFamily::plus, cfg).second;
  }
  return 0.0;
}

inline std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::I: return "I";
    case KernelKind::J: return "J";
    case KernelKind::A: return "A";
    case KernelKind::B: return "B";
    case KernelKind::Im: return "Im";
    case KernelKind::Jm: return "Jm";
    case KernelKind::Ipm: return "Ipm";
    case KernelKind::Jpm: return "Jpm";
  }
  return "?";
}

inline KernelKind kernel_kind_from_string(const std::string& name) {
  for (KernelKind kind : {KernelKind::I, KernelKind::J, KernelKind::A, KernelKind::B,
                          KernelKind::Im, KernelKind::Jm, KernelKind::Ipm, KernelKind::Jpm}) {
    if (to_string(kind) == name) return kind;
  }
  throw DomainError("unknown kernel '" + name + "'");
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_ELLIPTIC_HPP
