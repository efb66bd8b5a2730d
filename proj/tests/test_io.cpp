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
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "robustpulse/extremal.hpp"
#include "robustpulse/io.hpp"

using namespace robustpulse;
using std::numbers::pi;

TEST(Io, NumberFormatting) {
  EXPECT_EQ(format_number(pi), "3.14159265359");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_TRUE(json_number(INFINITY).is_null());
  EXPECT_EQ(json_number(pi).dump(), "3.14159265359");
}

TEST(Io, ParseNumber) {
  EXPECT_DOUBLE_EQ(parse_number(" 2.5 ", "x"), 2.5);
  EXPECT_THROW(parse_number("2.5x", "x"), ParseError);
  EXPECT_THROW(parse_number("", "x"), ParseError);
}

TEST(Io, TrajectoryRoundTrip) {
  const Trajectory traj = integrate_extremal(simplest_extremal({pi / 2, 1.0, 3.0}), pi / 2, 200);
  std::stringstream buf;
  write_trajectory_csv(buf, traj);
  const Trajectory back = read_trajectory_csv(buf);
  ASSERT_EQ(back.samples.size(), traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    EXPECT_NEAR(back.samples[i].u, traj.samples[i].u, 1e-11 * std::max(1.0, std::abs(traj.samples[i].u)));
    EXPECT_NEAR(back.samples[i].s_x, traj.samples[i].s_x, 1e-11);
  }
  EXPECT_DOUBLE_EQ(back.theta_des, back.final().theta);
}

TEST(Io, WritingIsDeterministic) {
  const Trajectory traj = integrate_extremal(simplest_extremal({pi / 2, 1.0, 30.0}), pi / 2, 100);
  std::ostringstream a, b;
  write_trajectory_csv(a, traj);
  write_trajectory_csv(b, traj);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Io, MalformedTrajectory) {
  std::istringstream bad_header("t,theta,u\n0,0,0\n");
  EXPECT_THROW(read_trajectory_csv(bad_header), ParseError);
  std::istringstream bad_field("t,theta,u,S_z,S_x\n0,0,0,0,0\n1,x,0,0,0\n");
  EXPECT_THROW(read_trajectory_csv(bad_field), ParseError);
  std::istringstream ragged("t,theta,u,S_z,S_x\n0,0,0,0,0\n1,0,0\n");
  EXPECT_THROW(read_trajectory_csv(ragged), ParseError);
  std::istringstream one_row("t,theta,u,S_z,S_x\n0,0,0,0,0\n");
  EXPECT_THROW(read_trajectory_csv(one_row), ParseError);
}

TEST(Io, ControlCsv) {
  std::istringstream in("t,u1,u2\n0,1,2\n0.5,1,2\n1,1,2\n");
  const SampledControl c = read_control_csv(in);
  EXPECT_EQ(c.channels(), 2u);
  EXPECT_DOUBLE_EQ(c.value(1, 0.7), 2.0);
  std::istringstream no_channel("t\n0\n1\n");
  EXPECT_THROW(read_control_csv(no_channel), ParseError);
}

TEST(Io, GammaGrids) {
  EXPECT_EQ(parse_gamma_grid("0,1,2.5"), (std::vector<double>{0.0, 1.0, 2.5}));
  const auto g = parse_gamma_grid("geom:1e-3:1e4:30");
  ASSERT_EQ(g.size(), 30u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_NEAR(g.back(), 1e4, 1e-8);
  EXPECT_NEAR(g[1] / g[0], g[2] / g[1], 1e-12);
  EXPECT_EQ(parse_gamma_grid("lin:0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(parse_gamma_grid("2,1"), ParseError);
  EXPECT_THROW(parse_gamma_grid("-1,1"), ParseError);
  EXPECT_THROW(parse_gamma_grid("geom:0:1:3"), ParseError);
  EXPECT_THROW(parse_gamma_grid("lin:0:1:2.5"), ParseError);
}

TEST(Io, ToleranceFromEnvironment) {
  ::setenv("ROBUSTPULSE_TEST_TOL", "1e-9", 1);
  auto cfg = quad_config_from_env("ROBUSTPULSE_TEST_TOL");
  EXPECT_DOUBLE_EQ(cfg.abs_tol, 1e-9);
  EXPECT_DOUBLE_EQ(cfg.rel_tol, 1e-9);
  ::setenv("ROBUSTPULSE_TEST_TOL", "1e-10,1e-8", 1);
  cfg = quad_config_from_env("ROBUSTPULSE_TEST_TOL");
  EXPECT_DOUBLE_EQ(cfg.abs_tol, 1e-10);
  EXPECT_DOUBLE_EQ(cfg.rel_tol, 1e-8);
  ::setenv("ROBUSTPULSE_TEST_TOL", "-1", 1);
  EXPECT_THROW(quad_config_from_env("ROBUSTPULSE_TEST_TOL"), ParseError);
  ::unsetenv("ROBUSTPULSE_TEST_TOL");
  EXPECT_DOUBLE_EQ(quad_config_from_env("ROBUSTPULSE_TEST_TOL").abs_tol, QuadConfig{}.abs_tol);
}

TEST(Io, ParamsJsonKeys) {
  const Json j = to_json(limit_solution());
  EXPECT_EQ(j["regime"], "one_pair_switch");
  EXPECT_TRUE(j["gamma"].is_null());
  EXPECT_EQ(j.begin().key(), "c");
  EXPECT_EQ(to_json(Regime::m_switch(2, SwitchFamily::plus)), "m_switch(2,plus)");
}

TEST(Io, ModelFromJson) {
  const Json j = Json::parse(R"({"dim_S": 2, "dim_E": 1,
    "controls": [[[0, [0, 1]], [[0, -1], 0]]],
    "H": [[1, 0], [0, -1]]})");
  const BipartiteModel m = model_from_json(j);
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.controls.size(), 1u);
  EXPECT_EQ(m.controls[0](0, 1), Complex(0, 1));
  EXPECT_EQ(m.H1.rows(), 2);
  EXPECT_THROW(model_from_json(Json::parse(R"({"dim_S": 2})")), ParseError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"dim_S": 2, "H": [[1, 0], [0]]})")), ParseError);
}
