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

#ifndef ROBUSTPULSE_DYNAMICS_HPP
#define ROBUSTPULSE_DYNAMICS_HPP

/**
 * @file dynamics.hpp
 * @brief Fixed-step integration of the single-qubit state/sensitivity system
 *
 *   theta' = u,   S_z' = cos 2 theta,   S_x' = sin 2 theta,
 *
 * either in closed loop along an extremal (u' = a_z sin 2 theta - a_x cos 2 theta)
 * or open loop under a prescribed control, plus the checks run on the result.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "robustpulse/errors.hpp"
#include "robustpulse/ode.hpp"
#include "robustpulse/types.hpp"

namespace robustpulse {

struct TrajectorySample {
  double t = 0.0;
  double theta = 0.0;
  double u = 0.0;
  double s_z = 0.0;
  double s_x = 0.0;
};

struct EndpointResiduals {
  double d_theta = 0.0;
  double d_s_z = 0.0;
  double d_s_x = 0.0;

  double max_abs() const { return std::max({std::abs(d_theta), std::abs(d_s_z), std::abs(d_s_x)}); }
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double theta_des = 0.0;
  double gamma = 0.0;
  EndpointResiduals endpoint_residuals;

  double horizon() const { return samples.empty() ? 0.0 : samples.back().t; }
  const TrajectorySample& final() const { return samples.back(); }

  void validate() const {
    if (samples.size() < 2) throw DomainError("Trajectory: need at least two samples");
    const auto& s0 = samples.front();
    if (s0.t != 0.0) throw DomainError("Trajectory: first sample must be at t = 0");
    if (s0.theta != 0.0 || s0.s_z != 0.0 || s0.s_x != 0.0) {
      throw DomainError("Trajectory: theta, S_z, S_x must start at 0");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (!(samples[i].t > samples[i - 1].t)) {
        throw DomainError("Trajectory: times must be strictly increasing");
      }
    }
  }

  bool uniform(double rel_tol = 1e-9) const {
    const double h = horizon() / static_cast<double>(samples.size() - 1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (std::abs(samples[i].t - h * static_cast<double>(i)) > rel_tol * horizon()) return false;
    }
    return true;
  }
};

/// Control given by samples, linearly interpolated; several channels share one time grid.
struct SampledControl {
  std::vector<double> t;
  std::vector<std::vector<double>> u;  // u[channel][sample]

  std::size_t channels() const { return u.size(); }
  double horizon() const { return t.back(); }

  void validate() const {
    if (t.size() < 2) throw DomainError("SampledControl: need at least two samples");
    if (t.front() != 0.0) throw DomainError("SampledControl: first sample must be at t = 0");
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) throw DomainError("SampledControl: times must be strictly increasing");
    }
    if (u.empty()) throw DomainError("SampledControl: no channels");
    for (const auto& ch : u) {
      if (ch.size() != t.size()) throw GridMismatch("SampledControl: channel length differs from grid");
    }
  }

  double value(std::size_t channel, double time) const {
    const auto& ch = u[channel];
    if (time <= t.front()) return ch.front();
    if (time >= t.back()) return ch.back();
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (time - t[i]) / (t[i + 1] - t[i]);
    return (1.0 - w) * ch[i] + w * ch[i + 1];
  }

  static SampledControl constant(double level, double horizon, std::size_t n = 1) {
    SampledControl c;
    for (std::size_t i = 0; i <= n; ++i) c.t.push_back(horizon * static_cast<double>(i) / n);
    c.u.assign(1, std::vector<double>(n + 1, level));
    return c;
  }
};

/// levels[i] holds on [breakpoints[i], breakpoints[i+1]).
struct PiecewiseConstantControl {
  std::vector<double> breakpoints;
  std::vector<double> levels;

  double horizon() const { return breakpoints.back(); }

  void validate() const {
    if (breakpoints.size() != levels.size() + 1 || levels.empty()) {
      throw DomainError("PiecewiseConstantControl: need one more breakpoint than levels");
    }
    if (breakpoints.front() != 0.0) throw DomainError("PiecewiseConstantControl: must start at 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
      if (!(breakpoints[i] > breakpoints[i - 1])) {
        throw DomainError("PiecewiseConstantControl: breakpoints must increase");
      }
    }
  }

  double energy() const {
    double e = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      e += 0.5 * levels[i] * levels[i] * (breakpoints[i + 1] - breakpoints[i]);
    }
    return e;
  }

  double value(double time) const {
    for (std::size_t i = levels.size(); i-- > 0;) {
      if (time >= breakpoints[i]) return levels[i];
    }
    return levels.front();
  }
};

namespace detail {

inline void require_steps(std::size_t n_steps, std::size_t minimum = 1) {
  if (n_steps < minimum) {
    std::ostringstream msg;
    msg << "n_steps must be >= " << minimum << ", got " << n_steps;
    throw DomainError(msg.str());
  }
}

// (theta, u, S_z, S_x) with u' from the constants a_z, a_x.
struct ExtremalRhs {
  double a_z;
  double a_x;
  State<4> operator()(double, const State<4>& y) const {
    const double s2 = std::sin(2.0 * y[0]);
    const double c2 = std::cos(2.0 * y[0]);
    return {y[1], a_z * s2 - a_x * c2, c2, s2};
  }
};

}  // namespace detail

/// Endpoint state only; the shooting loop calls this thousands of times.
inline State<4> shoot_extremal(double c, double a_z, double a_x, double horizon, std::size_t n_steps) {
  const double h = horizon / static_cast<double>(n_steps);
  const detail::ExtremalRhs rhs{a_z, a_x};
  State<4> y{0.0, c, 0.0, 0.0};
  for (std::size_t i = 0; i < n_steps; ++i) y = rk4_step(rhs, h * static_cast<double>(i), y, h);
  return y;
}

inline Trajectory integrate_extremal(const ExtremalParams& params, double theta_des,
                                     std::size_t n_steps) {
  detail::require_steps(n_steps, 100);
  if (!(params.horizon_T > 0.0)) throw DomainError("integrate_extremal: horizon_T must be > 0");
  Trajectory traj;
  traj.theta_des = theta_des;
  traj.gamma = params.gamma;
  traj.samples.resize(n_steps + 1);
  const double h = params.horizon_T / static_cast<double>(n_steps);
  rk4_integrate(detail::ExtremalRhs{params.a_z, params.a_x}, 0.0, State<4>{0.0, params.c, 0.0, 0.0},
                h, n_steps, [&](std::size_t i, double t, const State<4>& y) {
                  traj.samples[i] = {t, y[0], y[1], y[2], y[3]};
                });
  traj.samples.back().t = params.horizon_T;
  const auto& end = traj.samples.back();
  traj.endpoint_residuals = {end.theta - theta_des, end.s_z - params.s_z_final,
                             end.s_x - params.s_x_final};
  return traj;
}

namespace detail {

inline Trajectory open_loop(double horizon, std::size_t n_steps, double theta_des,
                            const auto& control_at, const auto& node_value) {
  Trajectory traj;
  traj.theta_des = theta_des;
  traj.samples.resize(n_steps + 1);
  const double h = horizon / static_cast<double>(n_steps);
  auto rhs = [&](double t, const State<3>& y) -> State<3> {
    return {control_at(t), std::cos(2.0 * y[0]), std::sin(2.0 * y[0])};
  };
  State<3> y{0.0, 0.0, 0.0};
  traj.samples[0] = {0.0, 0.0, node_value(0, 0.0), 0.0, 0.0};
  for (std::size_t i = 0; i < n_steps; ++i) {
    y = rk4_step(rhs, h * static_cast<double>(i), y, h);
    const double t = i + 1 == n_steps ? horizon : h * static_cast<double>(i + 1);
    traj.samples[i + 1] = {t, y[0], node_value(i + 1, t), y[1], y[2]};
  }
  traj.endpoint_residuals = {y[0] - theta_des, 0.0, 0.0};
  return traj;
}

}  // namespace detail

/// Open-loop integration under a sampled control (channel 0). Residuals carry only d_theta.
inline Trajectory integrate_control(const SampledControl& control, double theta_des,
                                    std::size_t n_steps) {
  control.validate();
  detail::require_steps(n_steps);
  return detail::open_loop(
      control.horizon(), n_steps, theta_des, [&](double t) { return control.value(0, t); },
      [&](std::size_t, double t) { return control.value(0, t); });
}

/**
 * Open-loop integration under a piecewise-constant control. Every breakpoint
 * must fall on a grid node so no RK step straddles a jump.
 */
inline Trajectory integrate_control(const PiecewiseConstantControl& control, double theta_des,
                                    std::size_t n_steps) {
  control.validate();
  detail::require_steps(n_steps);
  const double horizon = control.horizon();
  const double h = horizon / static_cast<double>(n_steps);
  for (double b : control.breakpoints) {
    const double idx = b / h;
    if (std::abs(idx - std::round(idx)) > 1e-8) {
      std::ostringstream msg;
      msg << "integrate_control: breakpoint " << b << " is not on the " << n_steps << "-step grid";
      throw GridMismatch(msg.str());
    }
  }
  // Each step reads its level at the step midpoint, so stage times on a jump are harmless.
  double step_level = control.levels.front();
  auto at = [&](double) { return step_level; };
  Trajectory traj;
  traj.theta_des = theta_des;
  traj.samples.resize(n_steps + 1);
  State<3> y{0.0, 0.0, 0.0};
  traj.samples[0] = {0.0, 0.0, control.value(0.0), 0.0, 0.0};
  auto rhs = [&](double t, const State<3>& s) -> State<3> {
    return {at(t), std::cos(2.0 * s[0]), std::sin(2.0 * s[0])};
  };
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t0 = h * static_cast<double>(i);
    step_level = control.value(t0 + 0.5 * h);
    y = rk4_step(rhs, t0, y, h);
    const double t = i + 1 == n_steps ? horizon : h * static_cast<double>(i + 1);
    const double node_u = i + 1 == n_steps ? control.levels.back() : control.value(t);
    traj.samples[i + 1] = {t, y[0], node_u, y[1], y[2]};
  }
  traj.endpoint_residuals = {y[0] - theta_des, 0.0, 0.0};
  return traj;
}

/// 1/2 int u^2 by the trapezoidal rule on the trajectory grid.
inline double energy_of(const Trajectory& traj) {
  double e = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1];
    const auto& b = traj.samples[i];
    e += 0.25 * (b.t - a.t) * (a.u * a.u + b.u * b.u);
  }
  return e;
}

/// 1/2 (S_z(T)^2 + S_x(T)^2).
inline double sensitivity_cost_of(const Trajectory& traj) {
  const auto& f = traj.final();
  return 0.5 * (f.s_z * f.s_z + f.s_x * f.s_x);
}

/// int_0^T S_z cos 2 theta + S_x sin 2 theta dt, composite Simpson (trapezoid on an odd tail).
inline double sensitivity_cost_lagrange(const Trajectory& traj) {
  auto g = [](const TrajectorySample& s) {
    return s.s_z * std::cos(2.0 * s.theta) + s.s_x * std::sin(2.0 * s.theta);
  };
  const auto& smp = traj.samples;
  const std::size_t n = smp.size() - 1;
  const std::size_t even = n - n % 2;
  double acc = 0.0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    const double h = smp[i + 2].t - smp[i].t;
    acc += h / 6.0 * (g(smp[i]) + 4.0 * g(smp[i + 1]) + g(smp[i + 2]));
  }
  if (even != n) acc += 0.5 * (smp[n].t - smp[n - 1].t) * (g(smp[n - 1]) + g(smp[n]));
  return acc;
}

inline double cost_of(const Trajectory& traj, double gamma) {
  return energy_of(traj) + gamma * sensitivity_cost_of(traj);
}

/// Max deviation of u^2/2 + a_z/2 cos 2theta + a_x/2 sin 2theta from c^2/2 + a_z/2.
inline double conserved_residual(const Trajectory& traj, const ExtremalParams& params) {
  const double h0 = 0.5 * params.c * params.c + 0.5 * params.a_z;
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const double h = 0.5 * s.u * s.u + 0.5 * params.a_z * std::cos(2.0 * s.theta) +
                     0.5 * params.a_x * std::sin(2.0 * s.theta);
    worst = std::max(worst, std::abs(h - h0));
  }
  return worst;
}

struct SymmetryResiduals {
  double theta = 0.0;
  double u = 0.0;
  double s_z = 0.0;
  double s_x = 0.0;

  double max_abs() const { return std::max({theta, u, s_z, s_x}); }
};

/**
 * Mirror identities t <-> T - t on a uniform grid, with theta_des = traj.theta_des:
 *   theta(t) = theta_des - theta(T-t),  u(t) = u(T-t),
 *   S_z(t) = cos 2th (S_z(T) - S_z(T-t)) + sin 2th (S_x(T) - S_x(T-t)),
 *   S_x(t) = sin 2th (S_z(T) - S_z(T-t)) - cos 2th (S_x(T) - S_x(T-t)).
 */
inline SymmetryResiduals verify_symmetry(const Trajectory& traj) {
  if (!traj.uniform()) throw GridMismatch("verify_symmetry: trajectory grid is not uniform");
  const auto& smp = traj.samples;
  const std::size_t n = smp.size() - 1;
  const double c2 = std::cos(2.0 * traj.theta_des);
  const double s2 = std::sin(2.0 * traj.theta_des);
  const auto& end = smp[n];
  SymmetryResiduals r;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto& a = smp[i];
    const auto& b = smp[n - i];
    const double dz = end.s_z - b.s_z;
    const double dx = end.s_x - b.s_x;
    r.theta = std::max(r.theta, std::abs(a.theta - (traj.theta_des - b.theta)));
    r.u = std::max(r.u, std::abs(a.u - b.u));
    r.s_z = std::max(r.s_z, std::abs(a.s_z - (c2 * dz + s2 * dx)));
    r.s_x = std::max(r.s_x, std::abs(a.s_x - (s2 * dz - c2 * dx)));
  }
  return r;
}

/// |S_z(T) sin theta_des - cos theta_des S_x(T)|.
inline double relation_residual(const Trajectory& traj) {
  const auto& end = traj.final();
  return std::abs(end.s_z * std::sin(traj.theta_des) - std::cos(traj.theta_des) * end.s_x);
}

/// Maps a trajectory on [0,1] to [0,T]: theta(t/T), u(t/T)/T, T S(t/T); gamma -> gamma / T^3.
inline Trajectory rescale(const Trajectory& traj, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("rescale: T must be > 0");
  if (std::abs(traj.horizon() - 1.0) > 1e-12) {
    throw DomainError("rescale: source trajectory must live on [0, 1]");
  }
  Trajectory out = traj;
  for (auto& s : out.samples) {
    s.t *= horizon;
    s.u /= horizon;
    s.s_z *= horizon;
    s.s_x *= horizon;
  }
  out.gamma = traj.gamma / (horizon * horizon * horizon);
  out.endpoint_residuals.d_s_z *= horizon;
  out.endpoint_residuals.d_s_x *= horizon;
  return out;
}

/// Times in (0, T) where u changes sign, located by linear interpolation.
inline std::vector<double> sign_changes(const Trajectory& traj, double zero_tol = 0.0) {
  std::vector<double> times;
  int last_sign = 0;
  double last_t = 0.0;
  double last_u = 0.0;
  for (const auto& s : traj.samples) {
    const int sign = s.u > zero_tol ? 1 : (s.u < -zero_tol ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      times.push_back(last_t + (s.t - last_t) * last_u / (last_u - s.u));
    }
    last_sign = sign;
    last_t = s.t;
    last_u = s.u;
  }
  return times;
}

struct CostateCheck {
  double max_state_deviation = 0.0;  // theta, S_z, S_x against the reduced system
  double max_control_deviation = 0.0;  // lambda_theta against u
  double lambda_z_final = 0.0;
  double lambda_x_final = 0.0;
};

/**
 * Reintegrates state and costates (theta, S_z, S_x, lambda_theta, lambda_z,
 * lambda_x) with mu_0 = -1, u = lambda_theta, starting from
 * (0, 0, 0, c, -gamma S_z(T), -gamma S_x(T)), and compares against `traj`,
 * which must share the grid. Transversality asks lambda_z(T) = lambda_x(T) = 0.
 */
inline CostateCheck costate_check(const ExtremalParams& params, const Trajectory& traj) {
  const std::size_t n = traj.samples.size() - 1;
  const double g = params.gamma;
  auto rhs = [g](double, const State<6>& y) -> State<6> {
    const double c2 = std::cos(2.0 * y[0]);
    const double s2 = std::sin(2.0 * y[0]);
    const double lt = y[3];
    // lambda_theta' = -dH/dtheta with H = -u^2/2 + (lambda_z - g S_z) cos2th + (lambda_x - g S_x) sin2th + lambda_theta u
    const double dlt = 2.0 * (y[4] - g * y[1]) * s2 - 2.0 * (y[5] - g * y[2]) * c2;
    return {lt, c2, s2, dlt, g * c2, g * s2};
  };
  const double h = traj.horizon() / static_cast<double>(n);
  CostateCheck out;
  const State<6> y0{0.0, 0.0, 0.0, params.c, -g * params.s_z_final, -g * params.s_x_final};
  const State<6> y = rk4_integrate(rhs, 0.0, y0, h, n, [&](std::size_t i, double, const State<6>& s) {
    const auto& ref = traj.samples[i];
    out.max_state_deviation = std::max(
        {out.max_state_deviation, std::abs(s[0] - ref.theta), std::abs(s[1] - ref.s_z),
         std::abs(s[2] - ref.s_x)});
    out.max_control_deviation = std::max(out.max_control_deviation, std::abs(s[3] - ref.u));
  });
  out.lambda_z_final = y[4];
  out.lambda_x_final = y[5];
  return out;
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_DYNAMICS_HPP
