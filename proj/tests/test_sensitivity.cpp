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
#include "robustpulse/sensitivity.hpp"

using namespace robustpulse;
using std::numbers::pi;

namespace {

SampledControl from_trajectory(const Trajectory& traj) {
  SampledControl c;
  c.u.resize(1);
  for (const auto& s : traj.samples) {
    c.t.push_back(s.t);
    c.u[0].push_back(s.u);
  }
  return c;
}

}  // namespace

TEST(Sensitivity, DephasingConstantControl) {
  const auto z = propagate_sensitivity(BipartiteModel::dephasing(), SampledControl::constant(pi / 2, 1.0), 1, 1000);
  EXPECT_NEAR(norm2(z.at(1, 1)), 4.0 / (pi * pi), 1e-9);
  EXPECT_LT(norm2(z.at(1, 0)), 1e-30);
}

TEST(Sensitivity, FirstOrderMatchesSensitivityFunctions) {
  // i Z^1_1 = S_z sigma_z + S_x sigma_x along the nominal trajectory.
  const ExtremalParams p = simplest_extremal({pi / 2, 1.0, 20.0});
  // The sampled control is linearly interpolated, so agreement is O(h^2).
  const Trajectory traj = integrate_extremal(p, pi / 2, 10000);
  const auto z = propagate_sensitivity(BipartiteModel::dephasing(), from_trajectory(traj), 1, 10000);
  const Matrix expected = traj.final().s_z * pauli::z() + traj.final().s_x * pauli::x();
  EXPECT_LT((Complex(0, 1) * z.at(1, 1) - expected).cwiseAbs().maxCoeff(), 5e-8);
  EXPECT_NEAR(norm2(z.at(1, 1)), p.sensitivity_norm2(), 5e-8);
}

TEST(Sensitivity, NominalPropagatorIsRotation) {
  const auto z = propagate_sensitivity(BipartiteModel::dephasing(), SampledControl::constant(0.7, 1.0), 1, 500);
  const Matrix expected = std::cos(0.7) * pauli::identity() + Complex(0, std::sin(0.7)) * pauli::y();
  EXPECT_LT((z.X_S - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sensitivity, TaylorAgreesWithDirectIntegration) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto model = BipartiteModel::random(seed);
    const auto control = SampledControl::constant(pi / 2, 1.0);
    const auto z = propagate_sensitivity(model, control, 2, 1000);
    const auto v = validate_taylor(model, control, z, 1e-3, 1e-3, 1000);
    EXPECT_LT(v.residual, 1e-8) << "seed " << seed;
  }
}

TEST(Sensitivity, TaylorResidualShrinksWithOrder) {
  const auto model = BipartiteModel::random(7, 2);
  SampledControl control = SampledControl::constant(1.0, 1.0, 10);
  control.u.push_back(std::vector<double>(control.t.size(), -0.4));
  const auto z = propagate_sensitivity(model, control, 3, 800);
  const Matrix direct = interaction_propagator(model, control, 1e-2, 1e-2, 800);
  double prev = 1.0;
  for (std::size_t order = 1; order <= 3; ++order) {
    const double r = (direct - z.taylor(1e-2, 1e-2, order)).cwiseAbs().maxCoeff();
    EXPECT_LT(r, prev * 0.1) << order;
    prev = r;
  }
}

TEST(Sensitivity, ShortHorizonVanishes) {
  const auto model = BipartiteModel::random(3);
  const auto z = propagate_sensitivity(model, SampledControl::constant(1.0, 1e-6), 2, 10);
  for (const auto& [key, m] : z.entries) EXPECT_LT(norm2(m), 1e-10);
}

TEST(Sensitivity, CrossTalkModelShape) {
  const auto m = BipartiteModel::cross_talk();
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.controls.size(), 2u);
  EXPECT_EQ(m.H.rows(), 4);
}

TEST(Sensitivity, RejectsNonHermitian) {
  auto m = BipartiteModel::dephasing();
  m.H(0, 1) = Complex(1.0, 0.0);
  EXPECT_THROW(m.validate(), NonHermitian);
}

TEST(Sensitivity, RejectsWrongDimensions) {
  auto m = BipartiteModel::dephasing();
  m.H2 = Matrix::Zero(2, 2);
  EXPECT_THROW(m.validate(), DimensionMismatch);
}

TEST(Sensitivity, MissingEntryThrows) {
  const auto z = propagate_sensitivity(BipartiteModel::dephasing(), SampledControl::constant(1.0, 1.0), 1, 10);
  EXPECT_THROW(z.at(2, 0), DomainError);
}
