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

#include "robustpulse/extremal.hpp"
#include "robustpulse/twoqubit.hpp"

using namespace robustpulse;
using std::numbers::pi;

TEST(TwoQubit, DecoupleTargets) {
  const auto [plus, minus] = decouple({0.9, 0.3, 2.0, 1.5});
  EXPECT_DOUBLE_EQ(plus.theta_des, 1.2);
  EXPECT_DOUBLE_EQ(minus.theta_des, 0.6);
  EXPECT_DOUBLE_EQ(plus.gamma, minus.gamma);
  EXPECT_DOUBLE_EQ(plus.horizon_T, 1.5);
}

TEST(TwoQubit, EqualNotGatesSplitIntoPiAndZero) {
  const auto sol = solve_two_qubit({pi / 2, pi / 2, 1.0});
  EXPECT_EQ(sol.plus.note, "constant / zero sensitivity");
  EXPECT_NEAR(sol.plus.cost, pi * pi / 2, 1e-9);
  EXPECT_LT(sol.split_residual, 1e-6);
  EXPECT_LT(std::abs(sol.theta1_residual), 1e-9);
  EXPECT_LT(std::abs(sol.theta2_residual), 1e-9);
}

TEST(TwoQubit, CostSplitIdentity) {
  for (double gamma : {0.0, 1.0, 10.0}) {
    const auto sol = solve_two_qubit({pi / 2, pi / 3, gamma});
    EXPECT_LT(sol.split_residual, 1e-6) << gamma;
    EXPECT_NEAR(2 * sol.cost, sol.plus.cost + sol.minus.cost, 1e-6) << gamma;
    EXPECT_LT(std::abs(sol.theta1_residual), 1e-9) << gamma;
    EXPECT_LT(std::abs(sol.theta2_residual), 1e-9) << gamma;
    EXPECT_LT(sol.pm_residual, 1e-9) << gamma;
  }
}

TEST(TwoQubit, ZeroTargets) {
  const auto sol = solve_two_qubit({0.0, 0.0, 0.0});
  for (const auto& s : sol.trajectory.samples) {
    EXPECT_EQ(s.u1, 0.0);
    EXPECT_EQ(s.u2, 0.0);
  }
  EXPECT_NEAR(sol.cost, 0.0, 1e-15);
}

TEST(TwoQubit, OddLiftParityHandled) {
  // theta+ = 5pi/4 and theta- = pi/4 reduce with opposite reflections; the
  // recombined angles must still land on the targets.
  const auto sol = solve_two_qubit({3 * pi / 4, pi / 2, 0.0});
  EXPECT_LT(std::abs(sol.theta1_residual), 1e-9);
  EXPECT_LT(std::abs(sol.theta2_residual), 1e-9);
  EXPECT_NEAR(sol.cost, 0.5 * (9 * pi * pi / 16 + pi * pi / 4), 1e-9);
}

TEST(TwoQubit, PropagatorAgreesWithSplitSensitivities) {
  const auto sol = solve_two_qubit({pi / 2, pi / 3, 1.0}, 2000);
  EXPECT_NEAR(two_qubit_sensitivity_propagated(sol.trajectory, 2000), two_qubit_sensitivity(sol.trajectory),
              5e-8);
}

TEST(TwoQubit, CoupledCostateCheck) {
  const auto sol = solve_two_qubit({1.0, 0.2, 10.0}, 4000);
  const auto cc = costate_check(sol.trajectory, 10.0);
  EXPECT_LT(cc.max_state_deviation, 1e-9);
  EXPECT_LT(cc.max_control_deviation, 1e-9);
  EXPECT_LT(cc.max_lambda_final, 1e-9);
  EXPECT_LT(cc.max_a_drift, 1e-9);
}

TEST(TwoQubit, RecombineRejectsMismatchedGrids) {
  const auto p = simplest_extremal({pi / 2, 1.0, 1.0});
  const Trajectory a = integrate_extremal(p, pi / 2, 200);
  const Trajectory b = integrate_extremal(p, pi / 2, 300);
  EXPECT_THROW(recombine(a, b), GridMismatch);
}

TEST(TwoQubit, InvalidSpec) {
  EXPECT_THROW(solve_two_qubit({pi / 2, std::nan(""), 1.0}), DomainError);
  EXPECT_THROW(solve_two_qubit({pi / 2, 0.1, -1.0}), DomainError);
}
