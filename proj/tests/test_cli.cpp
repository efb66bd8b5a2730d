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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "robustpulse/io.hpp"

namespace fs = std::filesystem;
using robustpulse::Json;

namespace {

const std::string kPiHalf = "1.5707963267948966";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(ROBUSTPULSE_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(ROBUSTPULSE_CLI) + " " + args + " --out " + dir.string() + " > " +
                          (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST(Cli, SolveNotGate) {
  const auto dir = scratch("solve");
  ASSERT_EQ(run("solve --theta-des " + kPiHalf + " --gamma 3", dir), 0);
  const Json p = load(dir / "params.json");
  EXPECT_EQ(p["regime"], "no_switch");
  EXPECT_TRUE(p["verification"]["passed"].get<bool>());
  const Json m = load(dir / "manifest.json");
  EXPECT_EQ(m["command"], "solve");
  EXPECT_EQ(m["outputs"], Json::parse(R"(["trajectory.csv", "params.json"])"));
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
}

TEST(Cli, SolveLargeGammaApproachesLimit) {
  const auto dir = scratch("solve_large");
  ASSERT_EQ(run("solve --theta-des " + kPiHalf + " --gamma 1e9", dir), 0);
  EXPECT_NEAR(load(dir / "params.json")["cost"].get<double>(), 4.58327686, 1e-6);
}

TEST(Cli, SolveIsDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  ASSERT_EQ(run("solve --theta-des 1 --gamma 5 --steps 2000", a), 0);
  ASSERT_EQ(run("solve --theta-des 1 --gamma 5 --steps 2000", b), 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "params.json"), slurp(b / "params.json"));
}

TEST(Cli, SolveJsonFormat) {
  const auto dir = scratch("solve_json");
  ASSERT_EQ(run("solve --theta-des " + kPiHalf + " --gamma 20 --format json --steps 500", dir), 0);
  const Json t = load(dir / "trajectory.json");
  EXPECT_EQ(t["t"].size(), 501u);
}

TEST(Cli, UsageErrors) {
  const auto dir = scratch("usage");
  EXPECT_EQ(run("solve --theta-des abc", dir), 2);
  EXPECT_EQ(run("solve --theta-des 1 --gamma -1", dir), 2);
  EXPECT_EQ(run("solve", dir), 2);
  EXPECT_EQ(run("quad --kind Q --k 0.1", dir), 2);
  EXPECT_EQ(run("quad --kind A --k 1.5", dir), 2);
  EXPECT_EQ(run("sweep --gamma-grid 3,1", dir), 2);
}

TEST(Cli, Limit) {
  const auto dir = scratch("limit");
  ASSERT_EQ(run("limit", dir), 0);
  const Json j = load(dir / "limit.json");
  EXPECT_NEAR(j["U"].get<double>(), 4.58327686324, 1e-10);
  ASSERT_EQ(j["sign_changes"].size(), 2u);
  EXPECT_NEAR(j["sign_changes"][0].get<double>() + j["sign_changes"][1].get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(fs::exists(dir / "plot.gp"));
}

TEST(Cli, VerifyLimitOutput) {
  const auto src = scratch("verify_src");
  ASSERT_EQ(run("limit --steps 4000", src), 0);
  const auto dir = scratch("verify");
  EXPECT_EQ(run("verify --input " + (src / "trajectory.csv").string(), dir), 0);
  const Json r = load(dir / "verify.json");
  EXPECT_LT(r["conserved_residual"].get<double>(), 1e-6);
  EXPECT_NEAR(r["fitted_constants"]["a_x"].get<double>(), -19.8253174019, 1e-5);
}

TEST(Cli, VerifyDetectsCorruption) {
  const auto src = scratch("corrupt_src");
  ASSERT_EQ(run("solve --theta-des " + kPiHalf + " --gamma 3 --steps 1000", src), 0);
  std::istringstream in(slurp(src / "trajectory.csv"));
  auto traj = robustpulse::read_trajectory_csv(in);
  traj.samples.back().theta += 0.1;
  const auto bad = src / "bad.csv";
  {
    std::ofstream out(bad);
    robustpulse::write_trajectory_csv(out, traj);
  }
  const auto dir = scratch("corrupt");
  EXPECT_EQ(run("verify --input " + bad.string() + " --theta-des " + kPiHalf, dir), 4);
  EXPECT_NEAR(load(dir / "verify.json")["endpoint_residuals"]["d_theta"].get<double>(), 0.1, 1e-9);
  EXPECT_EQ(run("verify --input " + bad.string(), dir), 4);
}

TEST(Cli, VerifyMalformedInput) {
  const auto dir = scratch("malformed");
  {
    std::ofstream out(dir / "x.csv");
    out << "t,theta\n0,0\n";
  }
  EXPECT_EQ(run("verify --input " + (dir / "x.csv").string(), dir), 2);
  EXPECT_EQ(run("verify --input " + (dir / "missing.csv").string(), dir), 2);
}

TEST(Cli, Sweep) {
  const auto dir = scratch("sweep");
  ASSERT_EQ(run("sweep --gamma-grid geom:0.1:1000:8", dir), 0);
  const std::string csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "gamma,cost,lower,upper,regime,k,c,S");
  EXPECT_NE(csv.find("one_pair_switch"), std::string::npos);
  EXPECT_TRUE(load(dir / "sweep_report.json")["passed"].get<bool>());
}

TEST(Cli, TwoQubit) {
  const auto dir = scratch("two_qubit");
  ASSERT_EQ(run("two-qubit --theta1 " + kPiHalf + " --theta2 " + kPiHalf + " --gamma 1 --steps 2000", dir), 0);
  EXPECT_EQ(load(dir / "plus.json")["tag"], "constant / zero sensitivity");
  EXPECT_LT(load(dir / "report.json")["cost_split_residual"].get<double>(), 1e-6);
  const std::string csv = slurp(dir / "two_qubit.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,theta1,theta2,u1,u2,S_zz,S_zx,S_xz,S_xx");
}

TEST(Cli, TwoQubitZero) {
  const auto dir = scratch("two_qubit_zero");
  EXPECT_EQ(run("two-qubit --theta1 0 --theta2 0 --gamma 0 --steps 200", dir), 0);
}

TEST(Cli, SensitivityDephasing) {
  const auto dir = scratch("sens");
  ASSERT_EQ(run("sensitivity --model dephasing --order 1", dir), 0);
  const Json r = load(dir / "sensitivity.json");
  bool found = false;
  for (const auto& row : r["norms"]) {
    if (row["n"] == 1 && row["j"] == 1) {
      EXPECT_NEAR(row["norm2"].get<double>(), 0.405284734569, 1e-11);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, SensitivityValidateRandom) {
  const auto dir = scratch("sens_random");
  ASSERT_EQ(run("sensitivity --model random:4 --order 2 --validate --full", dir), 0);
  const Json r = load(dir / "sensitivity.json");
  EXPECT_LT(r["validation"]["residual"].get<double>(), 1e-8);
  EXPECT_TRUE(r["norms"][0].contains("matrix"));
}

TEST(Cli, SensitivityRejectsNonHermitian) {
  const auto dir = scratch("sens_bad");
  {
    std::ofstream out(dir / "m.json");
    out << R"({"dim_S": 2, "dim_E": 1, "H": [[1, 1], [0, -1]]})";
  }
  EXPECT_EQ(run("sensitivity --model " + (dir / "m.json").string(), dir), 2);
  EXPECT_EQ(run("sensitivity --order 5", dir), 2);
}

TEST(Cli, SensitivityControlFile) {
  const auto dir = scratch("sens_control");
  {
    std::ofstream out(dir / "u.csv");
    out << "t,u\n0,1.5707963267948966\n1,1.5707963267948966\n";
  }
  ASSERT_EQ(run("sensitivity --control " + (dir / "u.csv").string(), dir), 0);
}

TEST(Cli, Quad) {
  const auto dir = scratch("quad");
  ASSERT_EQ(run("quad --kind Jm --k 0.3 --m 2", dir), 0);
  EXPECT_NEAR(load(dir / "quad.json")["value"].get<double>(), 2.03854799011, 1e-10);
}

TEST(Cli, ToleranceEnvironment) {
  const auto dir = scratch("quad_env");
  ::setenv("ROBUSTPULSE_TOL", "1e-10", 1);
  const int code = run("quad --kind I --k 0", dir);
  ::unsetenv("ROBUSTPULSE_TOL");
  ASSERT_EQ(code, 0);
  EXPECT_DOUBLE_EQ(load(dir / "manifest.json")["tolerances"]["abs_tol"].get<double>(), 1e-10);
}
