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

#ifndef ROBUSTPULSE_QUADRATURE_HPP
#define ROBUSTPULSE_QUADRATURE_HPP

/**
 * @file quadrature.hpp
 * @brief Globally adaptive Gauss-Kronrod (10/21 point) quadrature.
 *
 * The interval with the largest error estimate is bisected until the summed
 * estimate falls below max(abs_tol, rel_tol * |integral|). The error estimate
 * of a panel is |K21 - G10|, which is pessimistic for smooth integrands; the
 * returned value is the Kronrod sum.
 *
 * Integrands are expected to be bounded. Endpoint singularities have to be
 * removed by the caller with a change of variables.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "robustpulse/errors.hpp"

namespace robustpulse {

struct QuadConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = std::size_t{1} << 20;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      throw DomainError("QuadConfig: tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) {
      throw DomainError("QuadConfig: max_subdivisions must be >= 1");
    }
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
};

namespace detail {

// QUADPACK qk21 abscissae (positive half, descending) and weights.
inline constexpr std::array<double, 11> kGk21Nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kGk21KronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478618, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
inline constexpr std::array<double, 5> kG10Weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = kGk21KronrodWeights[10] * f_center;
  double gauss = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = half * kGk21Nodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kGk21KronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kG10Weights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over [a, b] (a <= b not required; reversed limits flip the sign).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadConfig& cfg = {}) {
  cfg.validate();
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate_adaptive(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gauss_kronrod_21(f, a, b));
  double total = panels.top().value;
  double total_error = panels.top().error;
  std::size_t subdivisions = 0;
  std::vector<detail::Panel> frozen;  // panels too narrow to split further

  auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

  while (total_error > target()) {
    if (panels.empty()) break;
    if (subdivisions >= cfg.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate_adaptive: tolerance not met after " << subdivisions
          << " subdivisions (error estimate " << total_error << ")";
      throw ConvergenceError(msg.str());
    }
    detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      frozen.push_back(worst);
      continue;
    }
    const detail::Panel left = detail::gauss_kronrod_21(f, worst.a, mid);
    const detail::Panel right = detail::gauss_kronrod_21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }

  // Re-sum from scratch to shed the drift of the incremental updates.
  double value = 0.0;
  double error = 0.0;
  for (const auto& p : frozen) {
    value += p.value;
    error += p.error;
  }
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  if (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value)) && !frozen.empty()) {
    std::ostringstream msg;
    msg << "integrate_adaptive: roundoff limits accuracy (error estimate " << error << ")";
    throw ConvergenceError(msg.str());
  }
  return {value, error, subdivisions};
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_QUADRATURE_HPP
