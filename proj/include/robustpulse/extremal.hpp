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

#ifndef ROBUSTPULSE_EXTREMAL_HPP
#define ROBUSTPULSE_EXTREMAL_HPP

/**
 * @file extremal.hpp
 * @brief Extremals of the energy + gamma * sensitivity problem.
 *
 * NOT gate (theta_des = pi/2, T = 1): the elliptic parameter k is found by
 * bisection and everything else is closed form. Other targets go through the
 * shooting/continuation solver `solve_general`.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "robustpulse/dynamics.hpp"
#include "robustpulse/elliptic.hpp"
#include "robustpulse/errors.hpp"
#include "robustpulse/roots.hpp"
#include "robustpulse/types.hpp"

namespace robustpulse {

/// gamma_c = I(0)^3 / (2 J(0)), where the simplest extremal starts to switch.
inline double gamma_critical(const QuadConfig& cfg = {}) {
  const double i0 = eval_I(0.0, cfg);
  return i0 * i0 * i0 / (2.0 * eval_J(0.0, cfg));
}

/// Unique k >= 0 with I(k)^3 / J(k) = 2 gamma, for 0 < gamma <= gamma_c.
inline double solve_k_no_switch(double gamma, const QuadConfig& cfg = {}) {
  const double gc = gamma_critical(cfg);
  if (!(gamma > 0.0) || gamma > gc) {
    std::ostringstream msg;
    msg << "solve_k_no_switch: gamma must lie in (0, " << gc << "], got " << gamma;
    throw DomainError(msg.str());
  }
  if (gamma == gc) return 0.0;
  // I^3 - 2 gamma J is decreasing in k and positive at k = 0.
  auto f = [&](double k) {
    const double i = eval_I(k, cfg);
    return i * i * i - 2.0 * gamma * eval_J(k, cfg);
  };
  const double hi = expand_upper_bracket(f, 0.0, 1.0, 1e8);
  return bisect(f, hi == 1.0 ? 0.0 : 0.5 * hi, hi).root;
}

/// k_lim, the root of J_1 on (0, 1).
inline double k_limit(const QuadConfig& cfg = {}) {
  return bisect([&](double k) { return eval_I1_J1(k, cfg).second; }, 0.0, 0.9).root;
}

/// Unique k in (0, k_lim) with I_1(k)^3 / J_1(k) = 2 gamma, for gamma > gamma_c.
inline double solve_k_one_switch(double gamma, const QuadConfig& cfg = {}) {
  const double gc = gamma_critical(cfg);
  if (!(gamma > gc)) {
    std::ostringstream msg;
    msg << "solve_k_one_switch: gamma must exceed " << gc << ", got " << gamma;
    throw DomainError(msg.str());
  }
  if (std::isinf(gamma)) return k_limit(cfg);
  auto f = [&](double k) {
    const auto [i1, j1] = eval_I1_J1(k, cfg);
    return i1 * i1 * i1 - 2.0 * gamma * j1;
  };
  return bisect(f, 0.0, k_limit(cfg)).root;
}

/// Relative residual |I^3 - 2 gamma J| / I^3 of a root from either branch.
inline double k_residual(double k, double gamma, const QuadConfig& cfg = {}) {
  double i = 0.0;
  double j = 0.0;
  if (gamma <= gamma_critical(cfg)) {
    i = eval_I(k, cfg);
    j = eval_J(k, cfg);
  } else {
    std::tie(i, j) = eval_I1_J1(k, cfg);
  }
  return std::abs(i * i * i - 2.0 * gamma * j) / (i * i * i);
}

/// C_0(k) = k I^2 / 2 + 3 I J / 4.
inline double cost_C0(double k, const QuadConfig& cfg = {}) {
  const double i = eval_I(k, cfg);
  return 0.5 * k * i * i + 0.75 * i * eval_J(k, cfg);
}

/// C_m(k) = k I_m^2 / 2 + 3 I_m J_m / 4 on the minus or plus family.
inline double cost_Cm(double k, int m, SwitchFamily sign, const QuadConfig& cfg = {}) {
  const auto [i, j] = eval_Im_Jm(k, m, sign, cfg);
  return 0.5 * k * i * i + 0.75 * i * j;
}

inline double cost_C1(double k, const QuadConfig& cfg = {}) {
  return cost_Cm(k, 1, SwitchFamily::minus, cfg);
}

/// Closed-form cost of an extremal on [0, T]: c^2 T/2 - gamma T S_z + 3 gamma |S|^2 / 2.
inline double extremal_cost(double c, double s_z, double s_x, double gamma, double horizon) {
  return 0.5 * c * c * horizon - gamma * horizon * s_z + 1.5 * gamma * (s_z * s_z + s_x * s_x);
}

namespace detail {

inline bool is_not_gate(double theta) { return std::abs(theta - 0.5 * kPi) <= 1e-9; }

}  // namespace detail

/**
 * The simplest extremal for theta_des = pi/2 on [0, 1]: no switch for
 * gamma <= gamma_c, one mirror pair of switches above.
 */
inline ExtremalParams simplest_extremal(const ProblemSpec& spec, const QuadConfig& cfg = {}) {
  spec.validate();
  if (!detail::is_not_gate(spec.theta_des) || spec.horizon_T != 1.0) {
    throw DomainError("simplest_extremal: requires theta_des = pi/2 and T = 1");
  }
  const double gamma = spec.gamma;
  ExtremalParams p;
  p.theta_des = 0.5 * kPi;
  p.gamma = gamma;
  p.horizon_T = 1.0;
  p.s_z_final = 0.0;
  double s = 0.0;
  if (gamma == 0.0) {
    p.c = 0.5 * kPi;
    s = 2.0 / kPi;
    p.k = std::numeric_limits<double>::infinity();
    p.regime = Regime::no_switch();
    p.cost = kPi * kPi / 8.0;
  } else if (std::isinf(gamma)) {
    throw DomainError("simplest_extremal: use limit_solution for gamma = infinity");
  } else if (gamma <= gamma_critical(cfg)) {
    p.k = solve_k_no_switch(gamma, cfg);
    const double i = eval_I(p.k, cfg);
    const double j = eval_J(p.k, cfg);
    p.c = std::sqrt(p.k) * i;
    s = j / i;
    p.regime = Regime::no_switch();
    p.cost = 0.5 * p.k * i * i + 0.75 * i * j;
  } else {
    p.k = solve_k_one_switch(gamma, cfg);
    const auto [i1, j1] = eval_I1_J1(p.k, cfg);
    p.c = -std::sqrt(p.k) * i1;
    s = i1 * i1 / (2.0 * gamma);
    p.regime = Regime::one_pair_switch();
    p.cost = 0.5 * p.k * i1 * i1 + 0.75 * i1 * j1;
  }
  p.s_x_final = s;
  p.a_z = 0.0;
  p.a_x = -2.0 * gamma * s;
  return p;
}

/**
 * gamma -> infinity: the minimum-energy control with zero first-order
 * sensitivity. k_lim solves J_1(k) = 0, a = I_1(k_lim)^2, c = -sqrt(a k_lim).
 */
inline ExtremalParams limit_solution(const QuadConfig& cfg = {}) {
  ExtremalParams p;
  p.k = k_limit(cfg);
  const double i1 = eval_I1_J1(p.k, cfg).first;
  p.c = -std::sqrt(p.k) * i1;
  p.a_z = 0.0;
  p.a_x = -i1 * i1;
  p.s_z_final = 0.0;
  p.s_x_final = 0.0;
  p.regime = Regime::one_pair_switch();
  p.cost = 0.5 * p.k * i1 * i1;
  p.theta_des = 0.5 * kPi;
  p.gamma = std::numeric_limits<double>::infinity();
  p.horizon_T = 1.0;
  return p;
}

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;  // theta_des = 0 with gamma > 0: no bracket is claimed
};

/**
 * theta^2/(2T) <= C_opt <= theta^2/(2T) + gamma T^2 sin^2(theta) / (2 theta^2).
 * The upper end is the cost of the constant control theta/T.
 */
inline Bounds bounds(const ProblemSpec& spec) {
  spec.validate();
  const double th = spec.theta_des;
  const double T = spec.horizon_T;
  if (th == 0.0) return {0.0, 0.0, spec.gamma > 0.0};
  const double lower = th * th / (2.0 * T);
  const double s = std::sin(th);
  return {lower, lower + spec.gamma * T * T * s * s / (2.0 * th * th), false};
}

/// Three-piece control +L, -L, +L with L = 13 pi / 6 and switches at 1/13, 6/13.
inline PiecewiseConstantControl bang_zero_sensitivity() {
  const double level = 13.0 * kPi / 6.0;
  return {{0.0, 1.0 / 13.0, 6.0 / 13.0, 1.0}, {level, -level, level}};
}

struct NormalizedTarget {
  double theta = 0.0;  // in [0, pi]
  double sign = 1.0;   // -1 when the target was reflected
};

/// Reduces theta mod 2 pi to [0, 2 pi), then reflects (pi, 2 pi) onto (0, pi).
inline NormalizedTarget normalize_target(double theta) {
  if (!std::isfinite(theta)) throw DomainError("normalize_target: theta must be finite");
  double r = std::fmod(theta, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  if (r > kPi) return {2.0 * kPi - r, -1.0};
  return {r, 1.0};
}

struct ShootingConfig {
  std::size_t n_steps = 10000;
  double gamma_floor = 1e-2;
  double max_ratio = 1.5;
  double residual_tol = 1e-11;
  int max_newton = 60;
  int max_halvings = 12;
  int max_lifts = 6;
  bool exact_target = false;  // reach theta_des itself, not its class mod 2 pi

  void validate() const {
    if (n_steps < 100) throw DomainError("ShootingConfig: n_steps must be >= 100");
    if (!(gamma_floor > 0.0)) throw DomainError("ShootingConfig: gamma_floor must be > 0");
    if (!(max_ratio > 1.0)) throw DomainError("ShootingConfig: max_ratio must be > 1");
    if (!(residual_tol > 0.0)) throw DomainError("ShootingConfig: residual_tol must be > 0");
  }
};

namespace detail {

// Endpoint of (theta, u, S_z, S_x, energy).
inline State<5> shoot_with_energy(double c, double a_z, double a_x, double horizon,
                                  std::size_t n_steps) {
  const double h = horizon / static_cast<double>(n_steps);
  auto rhs = [a_z, a_x](double, const State<5>& y) -> State<5> {
    const double s2 = std::sin(2.0 * y[0]);
    const double c2 = std::cos(2.0 * y[0]);
    return {y[1], a_z * s2 - a_x * c2, c2, s2, 0.5 * y[1] * y[1]};
  };
  State<5> y{0.0, c, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n_steps; ++i) y = rk4_step(rhs, h * static_cast<double>(i), y, h);
  return y;
}

/**
 * Boundary map for a lift tau > 0. With S(T) parallel to (cos tau, sin tau),
 * S(T) = sigma (cos tau, sin tau) and p = 2 gamma sigma, the unknowns are
 * (c, p) and a_z = -p cos tau, a_x = -p sin tau.
 */
struct Shooter {
  double tau;
  double gamma;
  double horizon;
  std::size_t n_steps;

  double a_z(double p) const { return -p * std::cos(tau); }
  double a_x(double p) const { return -p * std::sin(tau); }

  std::array<double, 2> residual(double c, double p) const {
    const State<4> y = shoot_extremal(c, a_z(p), a_x(p), horizon, n_steps);
    const double sigma = y[2] * std::cos(tau) + y[3] * std::sin(tau);
    return {(y[0] - tau) / std::max(1.0, tau), (2.0 * gamma * sigma - p) / (1.0 + 2.0 * gamma)};
  }
};

inline double norm_inf(const std::array<double, 2>& r) {
  return std::max(std::abs(r[0]), std::abs(r[1]));
}

struct NewtonOutcome {
  double c = 0.0;
  double p = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::array<double, 2> last{};
  bool converged = false;
};

inline NewtonOutcome newton(const Shooter& sh, double c, double p, const ShootingConfig& cfg) {
  NewtonOutcome out{c, p};
  std::array<double, 2> r = sh.residual(c, p);
  double rn = norm_inf(r);
  for (int it = 0; it < cfg.max_newton; ++it) {
    out = {c, p, rn, r, rn <= cfg.residual_tol};
    if (out.converged || !std::isfinite(rn)) return out;
    const double hc = 1e-6 * std::max(1.0, std::abs(c));
    const double hp = 1e-6 * std::max(1.0, std::abs(p));
    const auto rc_plus = sh.residual(c + hc, p);
    const auto rc_minus = sh.residual(c - hc, p);
    const auto rp_plus = sh.residual(c, p + hp);
    const auto rp_minus = sh.residual(c, p - hp);
    const double j00 = (rc_plus[0] - rc_minus[0]) / (2.0 * hc);
    const double j10 = (rc_plus[1] - rc_minus[1]) / (2.0 * hc);
    const double j01 = (rp_plus[0] - rp_minus[0]) / (2.0 * hp);
    const double j11 = (rp_plus[1] - rp_minus[1]) / (2.0 * hp);
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) return out;
    const double dc = -(j11 * r[0] - j01 * r[1]) / det;
    const double dp = -(-j10 * r[0] + j00 * r[1]) / det;
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      const auto trial = sh.residual(c + lambda * dc, p + lambda * dp);
      const double tn = norm_inf(trial);
      if (std::isfinite(tn) && tn < (1.0 - 1e-4 * lambda) * rn) {
        c += lambda * dc;
        p += lambda * dp;
        r = trial;
        rn = tn;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) {
      // Stalled at the integrator's noise floor counts as converged when close.
      out.converged = rn <= 1e3 * cfg.residual_tol;
      return out;
    }
  }
  out = {c, p, rn, r, rn <= cfg.residual_tol};
  return out;
}

struct Candidate {
  double c = 0.0;
  double p = 0.0;
  double cost = 0.0;
};

inline int count_sign_changes(const Trajectory& traj) {
  return static_cast<int>(sign_changes(traj, 1e-12).size());
}

inline Regime classify(const Trajectory& traj, double c) {
  const int n = count_sign_changes(traj);
  if (n == 0) return Regime::no_switch();
  if (n == 2 && c < 0.0) return Regime::one_pair_switch();
  return Regime::m_switch((n + 1) / 2, c < 0.0 ? SwitchFamily::minus : SwitchFamily::plus);
}

inline std::vector<std::array<double, 2>> start_patterns(double tau, double gamma, double T) {
  const double c0 = std::max(tau, 1.0) / T;
  const double sinc = tau > 0.0 ? std::abs(std::sin(tau)) / tau : 1.0;
  const double p0 = std::max(1.0 / (T * T), std::min(2.0 * gamma * T * sinc, 20.0 / (T * T)));
  return {{c0, p0},         {-c0, p0},        {c0, -p0},        {-c0, -p0},
          {3.0 * c0, p0},   {-3.0 * c0, p0},  {0.5 * c0, 2.0 * p0}, {-0.5 * c0, 2.0 * p0}};
}

}  // namespace detail

/**
 * Shooting/continuation search for arbitrary theta_des and T.
 *
 * The target is normalized to [0, pi] (sign recorded), and each lift
 * tau in {theta, 2pi - theta, 2pi + theta, ...} is tried while its energy
 * floor tau^2/(2T) is below the best cost so far. On each lift gamma is
 * walked up a geometric ladder from the constant-control solution; at the
 * target gamma a multi-start adds any other roots, and the cheapest root
 * inside the cost bracket wins.
 */
inline ExtremalParams solve_general(const ProblemSpec& spec, std::size_t continuation_steps = 30,
                                    const ShootingConfig& cfg = {}) {
  spec.validate();
  cfg.validate();
  if (continuation_steps < 1) throw DomainError("solve_general: continuation_steps must be >= 1");
  const double T = spec.horizon_T;
  const double gamma = spec.gamma;
  if (std::isinf(gamma)) throw DomainError("solve_general: gamma must be finite");
  const NormalizedTarget target =
      cfg.exact_target ? NormalizedTarget{std::abs(spec.theta_des), spec.theta_des < 0.0 ? -1.0 : 1.0}
                       : normalize_target(spec.theta_des);

  if (target.theta == 0.0) {
    ExtremalParams p;
    p.c = 0.0;
    p.s_z_final = T;
    p.s_x_final = 0.0;
    p.a_z = -2.0 * gamma * T;
    p.a_x = 0.0;
    p.regime = Regime::no_switch();
    p.cost = 0.5 * gamma * T * T;
    p.theta_des = 0.0;
    p.gamma = gamma;
    p.horizon_T = T;
    p.optimality_claimed = false;
    p.note = "identity target: zero control, no optimality claim";
    return p;
  }

  const Bounds bracket = bounds({target.theta, T, gamma});
  const double bracket_tol = 1e-7 * std::max(1.0, bracket.upper);

  struct Best {
    double tau = 0.0;
    double lift_sign = 1.0;
    detail::Candidate cand;
    bool found = false;
  } best;
  double last_residual = std::numeric_limits<double>::infinity();
  double gamma_reached = 0.0;

  std::vector<std::pair<double, double>> lifts;  // (tau, sign of the lift)
  if (cfg.exact_target) lifts.push_back({target.theta, 1.0});
  for (int j = 0; !cfg.exact_target && static_cast<int>(lifts.size()) < cfg.max_lifts; ++j) {
    const double base = 2.0 * kPi * j;
    if (j > 0) lifts.push_back({base - target.theta, -1.0});
    if (lifts.empty() || std::abs(base + target.theta - lifts.back().first) > 1e-12) {
      lifts.push_back({base + target.theta, 1.0});
    }
  }

  for (const auto& [tau, lift_sign] : lifts) {
    if (best.found && tau * tau / (2.0 * T) >= best.cand.cost) break;
    if (!(tau > 0.0)) continue;

    // Roots of the two-equation map whose S(T) is not parallel to the lift
    // direction are not extremals (a_x != -2 gamma S_x); they get +inf.
    auto candidate_cost = [&](double c, double p) {
      const detail::Shooter sh{tau, gamma, T, cfg.n_steps};
      const State<5> y = detail::shoot_with_energy(c, sh.a_z(p), sh.a_x(p), T, cfg.n_steps);
      const double perp = std::abs(y[2] * std::sin(tau) - std::cos(tau) * y[3]);
      if (perp > 1e-8 * std::max(1.0, T)) return std::numeric_limits<double>::infinity();
      return extremal_cost(c, y[2], y[3], gamma, T);
    };

    std::vector<detail::Candidate> roots;
    auto accept = [&](const detail::NewtonOutcome& o) {
      if (!o.converged) return;
      const double cost = candidate_cost(o.c, o.p);
      if (cost < tau * tau / (2.0 * T) - bracket_tol) return;
      if (cost > bracket.upper + bracket_tol) return;
      roots.push_back({o.c, o.p, cost});
    };

    // Continuation from the constant control tau/T, whose sigma is T sin(tau)/tau.
    const double sigma0 = T * std::sin(tau) / tau;
    double c = tau / T;
    double p = 0.0;
    double g = 0.0;
    double prev_c = c, prev_p = p, prev_g = g;
    if (gamma > 0.0) {
      const double g_start = std::min(cfg.gamma_floor, gamma);
      const double ratio =
          std::min(cfg.max_ratio, std::pow(gamma / g_start, 1.0 / static_cast<double>(continuation_steps)));
      double next = g_start;
      bool on_branch = true;
      while (g < gamma) {
        double step_ratio = ratio;
        bool stepped = false;
        for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
          const double g_try = g == 0.0 ? next : std::min(gamma, g * step_ratio);
          double c_guess = c;
          double p_guess = g == 0.0 ? 2.0 * g_try * sigma0 : p;
          if (prev_g != g && g > 0.0) {
            const double w = (g_try - g) / (g - prev_g);
            c_guess = c + w * (c - prev_c);
            p_guess = p + w * (p - prev_p);
          }
          const detail::Shooter sh{tau, g_try, T, cfg.n_steps};
          const auto o = detail::newton(sh, c_guess, p_guess, cfg);
          last_residual = o.residual;
          if (o.converged) {
            prev_c = c, prev_p = p, prev_g = g;
            c = o.c, p = o.p, g = g_try;
            stepped = true;
            break;
          }
          step_ratio = std::sqrt(step_ratio);
          if (g == 0.0) next *= 0.5;
        }
        if (!stepped) {
          on_branch = false;
          break;
        }
      }
      gamma_reached = std::max(gamma_reached, g);
      if (on_branch) accept({c, p, 0.0, {}, true});
    } else {
      gamma_reached = 0.0;
      roots.push_back({c, 0.0, candidate_cost(c, 0.0)});
    }

    // Multi-start on a coarse grid; only roots found there are polished at full resolution.
    if (gamma > 0.0) {
      ShootingConfig coarse_cfg = cfg;
      coarse_cfg.n_steps = std::max<std::size_t>(200, cfg.n_steps / 20);
      coarse_cfg.residual_tol = 1e-8;
      coarse_cfg.max_newton = 30;
      const detail::Shooter coarse{tau, gamma, T, coarse_cfg.n_steps};
      const detail::Shooter fine{tau, gamma, T, cfg.n_steps};
      for (const auto& start : detail::start_patterns(tau, gamma, T)) {
        const auto rough = detail::newton(coarse, start[0], start[1], coarse_cfg);
        if (!rough.converged) continue;
        const bool known = std::any_of(roots.begin(), roots.end(), [&](const detail::Candidate& r) {
          return std::abs(r.c - rough.c) < 1e-4 * std::max(1.0, std::abs(r.c)) &&
                 std::abs(r.p - rough.p) < 1e-4 * std::max(1.0, std::abs(r.p));
        });
        if (!known) accept(detail::newton(fine, rough.c, rough.p, cfg));
      }
    }

    for (const auto& r : roots) {
      const bool better = !best.found || r.cost < best.cand.cost - 1e-12 ||
                          (std::abs(r.cost - best.cand.cost) <= 1e-12 && std::abs(r.c) < std::abs(best.cand.c));
      if (better) {
        best = {tau, lift_sign, r, true};
      }
    }
  }

  if (!best.found) {
    std::ostringstream msg;
    msg << "solve_general: no extremal found for theta_des = " << spec.theta_des
        << ", gamma = " << gamma << " (continuation reached gamma = " << gamma_reached << ")";
    throw NoConvergence(msg.str(), gamma_reached, gamma, last_residual, last_residual);
  }

  // Assemble on the lift, then undo the lift and reflection signs.
  const double tau = best.tau;
  const detail::Shooter sh{tau, gamma, T, cfg.n_steps};
  ExtremalParams out;
  out.c = best.cand.c;
  out.a_z = sh.a_z(best.cand.p);
  out.a_x = sh.a_x(best.cand.p);
  out.gamma = gamma;
  out.horizon_T = T;
  out.theta_des = tau;
  const State<5> y = detail::shoot_with_energy(out.c, out.a_z, out.a_x, T, cfg.n_steps);
  out.s_z_final = y[2];
  out.s_x_final = y[3];
  out.cost = extremal_cost(out.c, y[2], y[3], gamma, T);
  const double integrated = y[4] + 0.5 * gamma * (y[2] * y[2] + y[3] * y[3]);
  const auto res = sh.residual(out.c, best.cand.p);
  const double perp = std::abs(y[2] * std::sin(tau) - std::cos(tau) * y[3]);
  if (std::abs(integrated - out.cost) > 1e-7 * std::max(1.0, out.cost) || perp > 1e-7 * T ||
      detail::norm_inf(res) > 1e-8) {
    std::ostringstream msg;
    msg << "solve_general: root failed verification (cost gap " << integrated - out.cost
        << ", relation residual " << perp << ")";
    throw NoConvergence(msg.str(), gamma_reached, gamma, res[0], res[1]);
  }
  if (std::abs(std::sin(tau)) < 1e-12 && std::abs(best.cand.p) < 1e-9) {
    out.note = "constant / zero sensitivity";
  }
  out.regime = detail::classify(integrate_extremal(out, tau, cfg.n_steps), out.c);
  if (std::abs(std::cos(tau)) < 1e-12 && -out.a_x > 0.0) out.k = out.c * out.c / (-out.a_x);

  const double sign = target.sign * best.lift_sign;
  if (sign < 0.0) {
    out.c = -out.c;
    out.s_x_final = -out.s_x_final;
    out.a_x = -out.a_x;
    out.theta_des = -out.theta_des;
  }
  if (out.note.empty() && tau != target.theta) out.note = "reached through a 2k*pi lift";
  return out;
}

/**
 * Closed form when the normalized target is pi/2 (any T, by time scaling),
 * shooting otherwise.
 */
inline ExtremalParams solve(const ProblemSpec& spec, std::size_t continuation_steps = 30,
                            const ShootingConfig& shoot_cfg = {}, const QuadConfig& cfg = {}) {
  spec.validate();
  const NormalizedTarget target = normalize_target(spec.theta_des);
  if (!detail::is_not_gate(target.theta)) return solve_general(spec, continuation_steps, shoot_cfg);
  const double T = spec.horizon_T;
  ExtremalParams p = simplest_extremal({0.5 * kPi, 1.0, spec.gamma * T * T * T}, cfg);
  // u(t) = u1(t/T)/T, S = T S1, a = a1 / T^2, C = C1 / T.
  p.c /= T;
  p.s_z_final *= T;
  p.s_x_final *= T;
  p.a_z /= T * T;
  p.a_x /= T * T;
  p.cost /= T;
  p.gamma = spec.gamma;
  p.horizon_T = T;
  if (T != 1.0) p.k = std::numeric_limits<double>::quiet_NaN();
  if (target.sign < 0.0) {
    p.c = -p.c;
    p.s_x_final = -p.s_x_final;
    p.a_x = -p.a_x;
    p.theta_des = -p.theta_des;
  }
  return p;
}

/// Reaches theta_des exactly (no reduction mod 2 pi).
inline ExtremalParams solve_exact(const ProblemSpec& spec, std::size_t continuation_steps = 30,
                                  ShootingConfig shoot_cfg = {}, const QuadConfig& cfg = {}) {
  spec.validate();
  if (detail::is_not_gate(std::abs(spec.theta_des))) return solve(spec, continuation_steps, shoot_cfg, cfg);
  shoot_cfg.exact_target = true;
  return solve_general(spec, continuation_steps, shoot_cfg);
}

struct SweepRow {
  double gamma = 0.0;
  ExtremalParams params;
  double cost = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Regime regime;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> violations;  // monotonicity / bracket / growth-cap failures

  bool passed() const {
    if (!violations.empty()) return false;
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
  }
};

/**
 * One row per gamma (rows solved concurrently), then the row-to-row checks:
 * cost nondecreasing, lower <= cost <= upper, C(g2) <= C(g1) + T^2 (g2 - g1).
 */
inline SweepResult sweep(const std::vector<double>& gammas, const ProblemSpec& spec_template,
                         std::size_t continuation_steps = 30) {
  if (gammas.empty()) throw DomainError("sweep: empty gamma grid");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0)) throw DomainError("sweep: gammas must be >= 0");
    if (i > 0 && gammas[i] < gammas[i - 1]) throw DomainError("sweep: gammas must be ascending");
  }
  const NormalizedTarget target = normalize_target(spec_template.theta_des);
  const double T = spec_template.horizon_T;

  auto solve_row = [&](double gamma) {
    SweepRow row;
    row.gamma = gamma;
    const Bounds b = bounds({target.theta, T, gamma});
    row.lower_bound = b.lower;
    row.upper_bound = b.upper;
    try {
      row.params = solve({spec_template.theta_des, T, gamma}, continuation_steps);
      row.cost = row.params.cost;
      row.regime = row.params.regime;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    return row;
  };

  SweepResult result;
  result.rows.resize(gammas.size());
  const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < gammas.size(); start += workers) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < std::min(gammas.size(), start + workers); ++i) {
      batch.push_back(std::async(std::launch::async, solve_row, gammas[i]));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) result.rows[start + i] = batch[i].get();
  }

  const double tol = 1e-9;
  const SweepRow* prev = nullptr;
  for (const auto& row : result.rows) {
    if (!row.ok) continue;
    const double scale = std::max(1.0, std::abs(row.cost));
    const bool degenerate = target.theta == 0.0 && row.gamma > 0.0;
    if (!degenerate && (row.cost < row.lower_bound - tol * scale ||
                        row.cost > row.upper_bound + tol * scale)) {
      std::ostringstream msg;
      msg << "gamma " << row.gamma << ": cost " << row.cost << " outside [" << row.lower_bound
          << ", " << row.upper_bound << "]";
      result.violations.push_back(msg.str());
    }
    if (prev != nullptr) {
      if (row.cost < prev->cost - tol * scale) {
        std::ostringstream msg;
        msg << "cost decreases from " << prev->cost << " at gamma " << prev->gamma << " to "
            << row.cost << " at gamma " << row.gamma;
        result.violations.push_back(msg.str());
      }
      if (row.cost > prev->cost + T * T * (row.gamma - prev->gamma) + tol * scale) {
        std::ostringstream msg;
        msg << "growth cap violated between gamma " << prev->gamma << " and " << row.gamma;
        result.violations.push_back(msg.str());
      }
    }
    prev = &row;
  }
  return result;
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_EXTREMAL_HPP
