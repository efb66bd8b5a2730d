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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "robustpulse/dynamics.hpp"
#include "robustpulse/extremal.hpp"

using namespace robustpulse;
using std::numbers::pi;

TEST(Dynamics, ConstantControlClosedForm) {
  // u = pi/2: theta = pi t/2, S_z = sin(pi t)/pi, S_x = (1 - cos(pi t))/pi.
  const Trajectory traj = integrate_control(SampledControl::constant(pi / 2, 1.0), pi / 2, 1000);
  const auto& end = traj.final();
  EXPECT_NEAR(end.theta, pi / 2, 1e-13);
  EXPECT_NEAR(end.s_z, 0.0, 1e-12);
  EXPECT_NEAR(end.s_x, 2.0 / pi, 1e-12);
  EXPECT_NEAR(energy_of(traj), pi * pi / 8, 1e-13);
  EXPECT_NEAR(sensitivity_cost_of(traj), 2.0 / (pi * pi), 1e-12);
}

TEST(Dynamics, BangControlZeroSensitivity) {
  const Trajectory traj = integrate_control(bang_zero_sensitivity(), pi / 2, 13000);
  EXPECT_NEAR(traj.final().theta, pi / 2, 1e-12);
  EXPECT_LT(std::abs(traj.final().s_z), 1e-8);
  EXPECT_LT(std::abs(traj.final().s_x), 1e-8);
  EXPECT_NEAR(energy_of(traj), 0.5 * std::pow(13 * pi / 6, 2), 1e-9);
}

TEST(Dynamics, BangControlOffGridThrows) {
  EXPECT_THROW(integrate_control(bang_zero_sensitivity(), pi / 2, 1000), GridMismatch);
}

TEST(Dynamics, LagrangeAndMayerSensitivityAgree) {
  // int S . (cos 2th, sin 2th) dt = |S(T)|^2 / 2.
  const ExtremalParams p = simplest_extremal({pi / 2, 1.0, 20.0});
  const Trajectory traj = integrate_extremal(p, pi / 2, 4000);
  EXPECT_NEAR(sensitivity_cost_lagrange(traj), sensitivity_cost_of(traj), 1e-10);
}

TEST(Dynamics, ExtremalChecksOnClosedForm) {
  for (double gamma : {0.0, 2.0, 7.0, 10.0, 500.0}) {
    const ExtremalParams p = simplest_extremal({pi / 2, 1.0, gamma});
    const Trajectory traj = integrate_extremal(p, pi / 2, 10000);
    EXPECT_LT(traj.endpoint_residuals.max_abs(), 1e-9) << gamma;
    EXPECT_LT(verify_symmetry(traj).max_abs(), 1e-9) << gamma;
    EXPECT_LT(relation_residual(traj), 1e-9) << gamma;
    EXPECT_LT(conserved_residual(traj, p), 1e-9) << gamma;
    EXPECT_NEAR(cost_of(traj, gamma), p.cost, 1e-7) << gamma;
  }
}

TEST(Dynamics, SwitchCountMatchesRegime) {
  const Trajectory below = integrate_extremal(simplest_extremal({pi / 2, 1.0, 5.0}), pi / 2, 2000);
  EXPECT_TRUE(sign_changes(below).empty());
  const Trajectory above = integrate_extremal(simplest_extremal({pi / 2, 1.0, 50.0}), pi / 2, 2000);
  const auto times = sign_changes(above);
  ASSERT_EQ(times.size(), 2u);
  EXPECT_NEAR(times[0] + times[1], 1.0, 1e-6);
}

TEST(Dynamics, LimitSolutionIsZeroSensitivity) {
  const ExtremalParams p = limit_solution();
  const Trajectory traj = integrate_extremal(p, pi / 2, 10000);
  EXPECT_LT(std::abs(traj.final().theta - pi / 2), 1e-9);
  EXPECT_LT(std::abs(traj.final().s_z), 1e-9);
  EXPECT_LT(std::abs(traj.final().s_x), 1e-9);
  EXPECT_NEAR(energy_of(traj), p.cost, 1e-6);
}

TEST(Dynamics, CostateReintegration) {
  for (double gamma : {1.0, 10.0}) {
    const ExtremalParams p = simplest_extremal({pi / 2, 1.0, gamma});
    const Trajectory traj = integrate_extremal(p, pi / 2, 5000);
    const CostateCheck cc = costate_check(p, traj);
    EXPECT_LT(cc.max_state_deviation, 1e-9) << gamma;
    EXPECT_LT(cc.max_control_deviation, 1e-9) << gamma;
    EXPECT_LT(std::abs(cc.lambda_z_final), 1e-9) << gamma;
    EXPECT_LT(std::abs(cc.lambda_x_final), 1e-9) << gamma;
  }
}

TEST(Dynamics, RescalePreservesScaledCost) {
  const double T = 2.5;
  const double gamma1 = 4.0;
  const ExtremalParams p = simplest_extremal({pi / 2, 1.0, gamma1});
  const Trajectory unit = integrate_extremal(p, pi / 2, 4000);
  const Trajectory scaled = rescale(unit, T);
  EXPECT_NEAR(scaled.horizon(), T, 1e-14);
  EXPECT_NEAR(scaled.final().theta, pi / 2, 1e-9);
  // C(T, gamma1 / T^3) = C(1, gamma1) / T.
  EXPECT_NEAR(cost_of(scaled, gamma1 / (T * T * T)), cost_of(unit, gamma1) / T, 1e-12);
  EXPECT_THROW(rescale(scaled, 2.0), DomainError);
}

TEST(Dynamics, SampledControlInterpolates) {
  SampledControl c;
  c.t = {0.0, 0.5, 1.0};
  c.u = {{0.0, 1.0, 0.0}};
  EXPECT_DOUBLE_EQ(c.value(0, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(c.value(0, 1.0), 0.0);
  c.t = {0.0, 0.5, 0.4};
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Dynamics, NonUniformGridRejectedBySymmetry) {
  Trajectory traj;
  traj.samples = {{0.0, 0, 0, 0, 0}, {0.1, 0, 0, 0, 0}, {1.0, 0, 0, 0, 0}};
  EXPECT_FALSE(traj.uniform());
  EXPECT_THROW(verify_symmetry(traj), GridMismatch);
}

TEST(Dynamics, MinimumStepCount) {
  EXPECT_THROW(integrate_extremal(simplest_extremal({pi / 2, 1.0, 1.0}), pi / 2, 10), DomainError);
}
