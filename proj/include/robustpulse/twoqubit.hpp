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

#ifndef ROBUSTPULSE_TWOQUBIT_HPP
#define ROBUSTPULSE_TWOQUBIT_HPP

/**
 * @file twoqubit.hpp
 * @brief Two qubits with sigma_z x sigma_z cross-talk.
 *
 * H = -u1 sigma_y x 1 - u2 1 x sigma_y + delta sigma_z x sigma_z. With
 * theta+- = theta1 +- theta2 and u+- = u1 +- u2 the first-order sensitivity
 * splits as S_z+- = S_zz -+ S_xx, S_x+- = S_xz +- S_zx, each pair obeying the
 * one-qubit equations, so the problem is two independent one-qubit problems
 * and 2 C = C+ + C-.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "robustpulse/dynamics.hpp"
#include "robustpulse/errors.hpp"
#include "robustpulse/extremal.hpp"
#include "robustpulse/ode.hpp"
#include "robustpulse/sensitivity.hpp"
#include "robustpulse/types.hpp"

namespace robustpulse {

struct TwoQubitSpec {
  double theta1_des = 0.0;
  double theta2_des = 0.0;
  double gamma = 0.0;
  double horizon_T = 1.0;

  void validate() const {
    if (!std::isfinite(theta1_des) || !std::isfinite(theta2_des)) {
      throw DomainError("TwoQubitSpec: targets must be finite");
    }
    if (!(gamma >= 0.0)) throw DomainError("TwoQubitSpec: gamma must be >= 0");
    if (!(horizon_T > 0.0)) throw DomainError("TwoQubitSpec: horizon_T must be > 0");
  }
};

struct TwoQubitSample {
  double t = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double s_zz = 0.0;
  double s_zx = 0.0;
  double s_xz = 0.0;
  double s_xx = 0.0;
};

struct TwoQubitTrajectory {
  std::vector<TwoQubitSample> samples;

  const TwoQubitSample& final() const { return samples.back(); }
  double horizon() const { return samples.back().t; }
};

/// (plus, minus) one-qubit problems with targets theta1 + theta2 and theta1 - theta2.
inline std::pair<ProblemSpec, ProblemSpec> decouple(const TwoQubitSpec& spec) {
  spec.validate();
  return {{spec.theta1_des + spec.theta2_des, spec.horizon_T, spec.gamma},
          {spec.theta1_des - spec.theta2_des, spec.horizon_T, spec.gamma}};
}

/**
 * u_{1,2} = (u+ +- u-)/2 and theta likewise; the four S_ij are then integrated
 * from theta1, theta2 directly (Simpson per interval, theta at the midpoint
 * from the cubic Hermite interpolant built from theta and u).
 */
inline TwoQubitTrajectory recombine(const Trajectory& plus, const Trajectory& minus) {
  if (plus.samples.size() != minus.samples.size()) {
    throw GridMismatch("recombine: trajectories have different sample counts");
  }
  for (std::size_t i = 0; i < plus.samples.size(); ++i) {
    if (std::abs(plus.samples[i].t - minus.samples[i].t) > 1e-12 * std::max(1.0, plus.horizon())) {
      throw GridMismatch("recombine: trajectories have different time grids");
    }
  }
  TwoQubitTrajectory out;
  out.samples.resize(plus.samples.size());
  for (std::size_t i = 0; i < plus.samples.size(); ++i) {
    const auto& p = plus.samples[i];
    const auto& m = minus.samples[i];
    auto& s = out.samples[i];
    s.t = p.t;
    s.theta1 = 0.5 * (p.theta + m.theta);
    s.theta2 = 0.5 * (p.theta - m.theta);
    s.u1 = 0.5 * (p.u + m.u);
    s.u2 = 0.5 * (p.u - m.u);
  }
  auto rates = [](double th1, double th2) {
    const double c1 = std::cos(2.0 * th1), s1 = std::sin(2.0 * th1);
    const double c2 = std::cos(2.0 * th2), s2 = std::sin(2.0 * th2);
    return std::array<double, 4>{c1 * c2, c1 * s2, s1 * c2, s1 * s2};
  };
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    const auto& a = out.samples[i - 1];
    auto& b = out.samples[i];
    const double h = b.t - a.t;
    const double m1 = 0.5 * (a.theta1 + b.theta1) + h / 8.0 * (a.u1 - b.u1);
    const double m2 = 0.5 * (a.theta2 + b.theta2) + h / 8.0 * (a.u2 - b.u2);
    const auto fa = rates(a.theta1, a.theta2);
    const auto fm = rates(m1, m2);
    const auto fb = rates(b.theta1, b.theta2);
    std::array<double, 4> inc{};
    for (int q = 0; q < 4; ++q) inc[q] = h / 6.0 * (fa[q] + 4.0 * fm[q] + fb[q]);
    b.s_zz = a.s_zz + inc[0];
    b.s_zx = a.s_zx + inc[1];
    b.s_xz = a.s_xz + inc[2];
    b.s_xx = a.s_xx + inc[3];
  }
  return out;
}

/// ||Z^1_1(T)||^2 = S_zz^2 + S_zx^2 + S_xz^2 + S_xx^2.
inline double two_qubit_sensitivity(const TwoQubitTrajectory& traj) {
  const auto& f = traj.final();
  return f.s_zz * f.s_zz + f.s_zx * f.s_zx + f.s_xz * f.s_xz + f.s_xx * f.s_xx;
}

/// The same norm from the generic propagator on the 4-level cross-talk model.
inline double two_qubit_sensitivity_propagated(const TwoQubitTrajectory& traj, std::size_t n_steps) {
  SampledControl control;
  control.u.assign(2, {});
  for (const auto& s : traj.samples) {
    control.t.push_back(s.t);
    control.u[0].push_back(s.u1);
    control.u[1].push_back(s.u2);
  }
  const auto tensor = propagate_sensitivity(BipartiteModel::cross_talk(), control, 1, n_steps);
  return norm2(tensor.at(1, 1));
}

/// Energy 1/2 int (u1^2 + u2^2) by composite Simpson (trapezoid on an odd tail).
inline double two_qubit_energy(const TwoQubitTrajectory& traj) {
  const auto& smp = traj.samples;
  auto g = [](const TwoQubitSample& s) { return 0.5 * (s.u1 * s.u1 + s.u2 * s.u2); };
  const std::size_t n = smp.size() - 1;
  const std::size_t even = n - n % 2;
  double acc = 0.0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    acc += (smp[i + 2].t - smp[i].t) / 6.0 * (g(smp[i]) + 4.0 * g(smp[i + 1]) + g(smp[i + 2]));
  }
  if (even != n) acc += 0.5 * (smp[n].t - smp[n - 1].t) * (g(smp[n - 1]) + g(smp[n]));
  return acc;
}

inline double two_qubit_cost(const TwoQubitTrajectory& traj, double gamma) {
  return two_qubit_energy(traj) + 0.5 * gamma * two_qubit_sensitivity(traj);
}

struct TwoQubitSolution {
  TwoQubitTrajectory trajectory;
  double cost = 0.0;  // from the coupled system
  ExtremalParams plus;
  ExtremalParams minus;
  Trajectory plus_trajectory;
  Trajectory minus_trajectory;
  double split_residual = 0.0;  // |2 C - (C+ + C-)|
  double theta1_residual = 0.0;  // wrapped to (-pi, pi]
  double theta2_residual = 0.0;
  double pm_residual = 0.0;      // coupled S_ij against the +- one-qubit sensitivities
  std::string note;
};

namespace detail {

inline double wrap_angle(double x) { return std::remainder(x, 2.0 * kPi); }

inline long lift_index(const ExtremalParams& p, double target) {
  return std::lround((p.theta_des - target) / (2.0 * kPi));
}

}  // namespace detail

/**
 * Solves the +- problems, fixes the lift parity so theta1 and theta2 both
 * land on their targets mod 2 pi, recombines, and recomputes the cost from
 * the coupled system.
 */
inline TwoQubitSolution solve_two_qubit(const TwoQubitSpec& spec, std::size_t n_steps = 10000,
                                        std::size_t continuation_steps = 30) {
  spec.validate();
  detail::require_steps(n_steps, 100);
  const auto [plus_spec, minus_spec] = decouple(spec);
  auto solve_branch = [&](const ProblemSpec& s, const char* label) {
    try {
      return solve(s, continuation_steps);
    } catch (const NoConvergence& e) {
      throw NoConvergence(std::string(label) + " branch: " + e.what(), e.gamma_reached,
                          e.gamma_target, e.residual_theta, e.residual_sensitivity);
    } catch (const std::exception& e) {
      throw ConvergenceError(std::string(label) + " branch: " + e.what());
    }
  };
  auto solve_branch_exact = [&](const ProblemSpec& s, const char* label) {
    try {
      return solve_exact(s, continuation_steps);
    } catch (const std::exception& e) {
      throw ConvergenceError(std::string(label) + " branch: " + e.what());
    }
  };

  TwoQubitSolution sol;
  sol.plus = solve_branch(plus_spec, "plus");
  sol.minus = solve_branch(minus_spec, "minus");

  // theta1 = (theta+ + theta-)/2 is off by pi per unit of odd lift parity.
  const long parity = detail::lift_index(sol.plus, plus_spec.theta_des) +
                      detail::lift_index(sol.minus, minus_spec.theta_des);
  if (parity % 2 != 0) {
    ExtremalParams best_plus = sol.plus;
    ExtremalParams best_minus = sol.minus;
    double best_total = std::numeric_limits<double>::infinity();
    for (int which = 0; which < 2; ++which) {
      for (double shift : {2.0 * kPi, -2.0 * kPi}) {
        const ExtremalParams& base = which == 0 ? sol.plus : sol.minus;
        const ProblemSpec alt_spec{base.theta_des + shift, spec.horizon_T, spec.gamma};
        const ExtremalParams alt = solve_branch_exact(alt_spec, which == 0 ? "plus" : "minus");
        const double total = alt.cost + (which == 0 ? sol.minus.cost : sol.plus.cost);
        if (total < best_total) {
          best_total = total;
          best_plus = which == 0 ? alt : sol.plus;
          best_minus = which == 0 ? sol.minus : alt;
        }
      }
    }
    sol.plus = best_plus;
    sol.minus = best_minus;
    sol.note = "lift parity fixed with a 2*pi shift";
  }

  sol.plus_trajectory = integrate_extremal(sol.plus, sol.plus.theta_des, n_steps);
  sol.minus_trajectory = integrate_extremal(sol.minus, sol.minus.theta_des, n_steps);
  sol.trajectory = recombine(sol.plus_trajectory, sol.minus_trajectory);
  sol.cost = two_qubit_cost(sol.trajectory, spec.gamma);
  sol.split_residual = std::abs(2.0 * sol.cost - (sol.plus.cost + sol.minus.cost));
  const auto& end = sol.trajectory.final();
  sol.theta1_residual = detail::wrap_angle(end.theta1 - spec.theta1_des);
  sol.theta2_residual = detail::wrap_angle(end.theta2 - spec.theta2_des);

  for (std::size_t i = 0; i < sol.trajectory.samples.size(); ++i) {
    const auto& s = sol.trajectory.samples[i];
    const auto& p = sol.plus_trajectory.samples[i];
    const auto& m = sol.minus_trajectory.samples[i];
    sol.pm_residual = std::max({sol.pm_residual, std::abs(s.s_zz - s.s_xx - p.s_z),
                                std::abs(s.s_xz + s.s_zx - p.s_x), std::abs(s.s_zz + s.s_xx - m.s_z),
                                std::abs(s.s_xz - s.s_zx - m.s_x)});
  }
  const std::string tag = "constant / zero sensitivity";
  if (sol.plus.note == tag || sol.minus.note == tag) {
    if (!sol.note.empty()) sol.note += "; ";
    sol.note += std::string(sol.plus.note == tag ? "plus" : "minus") + " branch " + tag;
  }
  return sol;
}

struct TwoQubitCostateCheck {
  double max_state_deviation = 0.0;
  double max_control_deviation = 0.0;  // lambda_theta_i against u_i
  double max_lambda_final = 0.0;       // transversality: lambda_ij(T)
  double max_a_drift = 0.0;            // variation of a_ij = 2 (lambda_ij - gamma S_ij)
};

/**
 * Co-integrates (theta1, theta2, S_ij, lambda_theta1, lambda_theta2, lambda_ij)
 * with mu_0 = -1 from lambda_theta_i(0) = u_i(0), lambda_ij(0) = -gamma S_ij(T),
 * and compares against the recombined trajectory on its grid.
 */
inline TwoQubitCostateCheck costate_check(const TwoQubitTrajectory& traj, double gamma) {
  const auto& smp = traj.samples;
  const std::size_t n = smp.size() - 1;
  const auto& end = smp.back();
  auto rhs = [gamma](double, const State<12>& y) -> State<12> {
    const double c1 = std::cos(2.0 * y[0]), s1 = std::sin(2.0 * y[0]);
    const double c2 = std::cos(2.0 * y[1]), s2 = std::sin(2.0 * y[1]);
    const std::array<double, 4> rate{c1 * c2, c1 * s2, s1 * c2, s1 * s2};
    // d rate / d theta1 and d rate / d theta2
    const std::array<double, 4> d1{-2.0 * s1 * c2, -2.0 * s1 * s2, 2.0 * c1 * c2, 2.0 * c1 * s2};
    const std::array<double, 4> d2{-2.0 * c1 * s2, 2.0 * c1 * c2, -2.0 * s1 * s2, 2.0 * s1 * c2};
    State<12> dy{};
    dy[0] = y[6];
    dy[1] = y[7];
    double l1 = 0.0, l2 = 0.0;
    for (int q = 0; q < 4; ++q) {
      dy[2 + q] = rate[q];
      const double w = y[8 + q] - gamma * y[2 + q];
      l1 -= w * d1[q];
      l2 -= w * d2[q];
      dy[8 + q] = gamma * rate[q];
    }
    dy[6] = l1;
    dy[7] = l2;
    return dy;
  };
  const State<12> y0{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, smp[0].u1, smp[0].u2,
                     -gamma * end.s_zz, -gamma * end.s_zx, -gamma * end.s_xz, -gamma * end.s_xx};
  std::array<double, 4> a0{};
  for (int q = 0; q < 4; ++q) a0[q] = 2.0 * (y0[8 + q] - gamma * y0[2 + q]);
  TwoQubitCostateCheck out;
  const double h = traj.horizon() / static_cast<double>(n);
  const State<12> y = rk4_integrate(rhs, 0.0, y0, h, n, [&](std::size_t i, double, const State<12>& s) {
    const auto& r = smp[i];
    out.max_state_deviation = std::max(
        {out.max_state_deviation, std::abs(s[0] - r.theta1), std::abs(s[1] - r.theta2),
         std::abs(s[2] - r.s_zz), std::abs(s[3] - r.s_zx), std::abs(s[4] - r.s_xz),
         std::abs(s[5] - r.s_xx)});
    out.max_control_deviation =
        std::max({out.max_control_deviation, std::abs(s[6] - r.u1), std::abs(s[7] - r.u2)});
    for (int q = 0; q < 4; ++q) {
      out.max_a_drift = std::max(out.max_a_drift, std::abs(2.0 * (s[8 + q] - gamma * s[2 + q]) - a0[q]));
    }
  });
  for (int q = 0; q < 4; ++q) out.max_lambda_final = std::max(out.max_lambda_final, std::abs(y[8 + q]));
  return out;
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_TWOQUBIT_HPP
