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

// robustpulse command-line front end.
//
// Exit codes: 0 pass, 2 usage/parse error, 3 solver failure, 4 verification failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robustpulse/robustpulse.hpp"

namespace fs = std::filesystem;
using namespace robustpulse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

constexpr double kVerifyTol = 1e-6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Run {
 public:
  Run(std::string command, std::string out_dir) : command_(std::move(command)), dir_(std::move(out_dir)) {
    fs::create_directories(dir_);
  }

  Json spec = Json::object();

  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path(name));
    out << content;
    outputs_.push_back(name);
  }

  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  void finish(const QuadConfig& cfg) {
    Json m;
    m["command"] = command_;
    m["spec"] = spec;
    m["tool_version"] = kVersion;
    m["tolerances"] = to_json(cfg);
    m["outputs"] = outputs_;
    std::ofstream out(path("manifest.json"), std::ios::binary);
    out << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::string dir_;
  std::vector<std::string> outputs_;
};

std::string trajectory_text(const Trajectory& traj, const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    write_trajectory_csv(out, traj);
    return out.str();
  }
  Json j;
  for (const char* key : {"t", "theta", "u", "S_z", "S_x"}) j[key] = Json::array();
  for (const auto& s : traj.samples) {
    j["t"].push_back(json_number(s.t));
    j["theta"].push_back(json_number(s.theta));
    j["u"].push_back(json_number(s.u));
    j["S_z"].push_back(json_number(s.s_z));
    j["S_x"].push_back(json_number(s.s_x));
  }
  return j.dump() + "\n";
}

Json residuals_json(const EndpointResiduals& r) {
  return {{"d_theta", json_number(r.d_theta)}, {"d_S_z", json_number(r.d_s_z)}, {"d_S_x", json_number(r.d_s_x)}};
}

Json symmetry_json(const SymmetryResiduals& r) {
  return {{"theta", json_number(r.theta)}, {"u", json_number(r.u)}, {"S_z", json_number(r.s_z)},
          {"S_x", json_number(r.s_x)}};
}

// Endpoint, mirror-symmetry, relation and constant-of-motion checks on an extremal.
struct Verification {
  Json report;
  bool passed = true;
};

Verification verify_extremal(const ExtremalParams& params, const Trajectory& traj) {
  Verification v;
  const auto sym = verify_symmetry(traj);
  const double rel = relation_residual(traj);
  const double com = conserved_residual(traj, params);
  const double integrated = cost_of(traj, params.gamma);
  v.report["endpoint_residuals"] = residuals_json(traj.endpoint_residuals);
  v.report["symmetry_residuals"] = symmetry_json(sym);
  v.report["u0_minus_uT"] = json_number(traj.samples.front().u - traj.final().u);
  v.report["relation_residual"] = json_number(rel);
  v.report["conserved_residual"] = json_number(com);
  if (std::isfinite(params.gamma)) v.report["cost_integrated"] = json_number(integrated);
  v.report["tolerance"] = kVerifyTol;
  v.passed = traj.endpoint_residuals.max_abs() < kVerifyTol && sym.max_abs() < kVerifyTol &&
             rel < kVerifyTol && com < kVerifyTol;
  v.report["passed"] = v.passed;
  return v;
}

Json failure_json(const std::exception& e) {
  Json j;
  j["error"] = e.what();
  if (const auto* nc = dynamic_cast<const NoConvergence*>(&e)) {
    j["gamma_reached"] = json_number(nc->gamma_reached);
    j["gamma_target"] = json_number(nc->gamma_target);
    j["residual_theta"] = json_number(nc->residual_theta);
    j["residual_sensitivity"] = json_number(nc->residual_sensitivity);
  }
  return j;
}

// --- subcommands -----------------------------------------------------------

struct SolveArgs {
  double theta_des = 0.0;
  double gamma = 0.0;
  double horizon = 1.0;
  std::size_t steps = 10000;
  std::size_t continuation = 30;
  std::string out = ".";
  std::string format = "csv";
};

int cmd_solve(const SolveArgs& a, const QuadConfig& cfg) {
  Run run("solve", a.out);
  run.spec = {{"theta_des", json_number(a.theta_des)}, {"gamma", json_number(a.gamma)},
              {"horizon_T", json_number(a.horizon)}, {"steps", a.steps}};
  ExtremalParams params;
  try {
    params = solve({a.theta_des, a.horizon, a.gamma}, a.continuation, {}, cfg);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const std::exception& e) {
    run.write_json("error.json", failure_json(e));
    run.finish(cfg);
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  const Trajectory traj = integrate_extremal(params, params.theta_des, a.steps);
  const Verification v = verify_extremal(params, traj);
  run.write("trajectory." + a.format, trajectory_text(traj, a.format));
  Json out = to_json(params);
  out["verification"] = v.report;
  run.write_json("params.json", out);
  run.finish(cfg);
  std::cout << out.dump(2) << "\n";
  return v.passed ? kExitOk : kExitVerify;
}

int cmd_limit(std::size_t steps, const std::string& out_dir, const std::string& format, const QuadConfig& cfg) {
  Run run("limit", out_dir);
  run.spec = {{"steps", steps}};
  const ExtremalParams p = limit_solution(cfg);
  const Trajectory traj = integrate_extremal(p, 0.5 * kPi, steps);
  const auto switches = sign_changes(traj);
  Json j;
  j["k_lim"] = json_number(p.k);
  j["I1_k_lim"] = json_number(eval_I1_J1(p.k, cfg).first);
  j["c"] = json_number(p.c);
  j["a"] = json_number(p.a());
  j["U"] = json_number(p.cost);
  j["sign_changes"] = Json::array();
  for (double t : switches) j["sign_changes"].push_back(json_number(t));
  j["u0"] = json_number(traj.samples.front().u);
  j["uT"] = json_number(traj.final().u);
  j["energy_integrated"] = json_number(energy_of(traj));
  const Verification v = verify_extremal(p, traj);
  j["verification"] = v.report;
  run.write("trajectory." + format, trajectory_text(traj, format));
  run.write_json("limit.json", j);
  if (format == "csv") {
    run.write("plot.gp",
              "# gnuplot: control u(t) and angle theta(t) of the limit solution\n"
              "set datafile separator ','\n"
              "set key autotitle columnhead\n"
              "set xlabel 't'\n"
              "plot 'trajectory.csv' using 1:3 with lines title 'u(t)', \\\n"
              "     'trajectory.csv' using 1:2 with lines title 'theta(t)'\n");
  }
  run.finish(cfg);
  std::cout << j.dump(2) << "\n";
  return v.passed ? kExitOk : kExitVerify;
}

int cmd_sweep(const std::string& grid, double theta_des, double horizon, std::size_t continuation,
              const std::string& out_dir, const QuadConfig& cfg) {
  Run run("sweep", out_dir);
  const auto gammas = parse_gamma_grid(grid);
  run.spec = {{"gamma_grid", grid}, {"theta_des", json_number(theta_des)}, {"horizon_T", json_number(horizon)}};
  const SweepResult result = sweep(gammas, {theta_des, horizon, 0.0}, continuation);
  std::ostringstream csv;
  csv << "gamma,cost,lower,upper,regime,k,c,S\n";
  bool failed_rows = false;
  for (const auto& r : result.rows) {
    if (!r.ok) {
      failed_rows = true;
      csv << format_number(r.gamma) << ",nan," << format_number(r.lower_bound) << ','
          << format_number(r.upper_bound) << ",error,nan,nan,nan\n";
      std::cerr << "gamma " << r.gamma << ": " << r.error << "\n";
      continue;
    }
    csv << format_number(r.gamma) << ',' << format_number(r.cost) << ',' << format_number(r.lower_bound)
        << ',' << format_number(r.upper_bound) << ',' << to_string(r.regime) << ','
        << format_number(r.params.k) << ',' << format_number(r.params.c) << ','
        << format_number(std::sqrt(r.params.sensitivity_norm2())) << '\n';
  }
  run.write("sweep.csv", csv.str());
  Json report;
  report["rows"] = result.rows.size();
  report["violations"] = result.violations;
  report["passed"] = result.passed();
  run.write_json("sweep_report.json", report);
  run.finish(cfg);
  std::cout << csv.str();
  for (const auto& v : result.violations) std::cerr << "violation: " << v << "\n";
  if (failed_rows) return kExitSolver;
  return result.violations.empty() ? kExitOk : kExitVerify;
}

int cmd_two_qubit(double theta1, double theta2, double gamma, double horizon, std::size_t steps,
                  const std::string& out_dir, const QuadConfig& cfg) {
  Run run("two-qubit", out_dir);
  run.spec = {{"theta1_des", json_number(theta1)}, {"theta2_des", json_number(theta2)},
              {"gamma", json_number(gamma)}, {"horizon_T", json_number(horizon)}, {"steps", steps}};
  TwoQubitSolution sol;
  try {
    sol = solve_two_qubit({theta1, theta2, gamma, horizon}, steps);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const std::exception& e) {
    run.write_json("error.json", failure_json(e));
    run.finish(cfg);
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  std::ostringstream csv;
  write_two_qubit_csv(csv, sol.trajectory);
  run.write("two_qubit.csv", csv.str());
  auto branch = [](const ExtremalParams& p, const char* label) {
    Json j = to_json(p);
    j["branch"] = label;
    j["tag"] = p.note.empty() ? "extremal" : p.note;
    return j;
  };
  run.write_json("plus.json", branch(sol.plus, "plus"));
  run.write_json("minus.json", branch(sol.minus, "minus"));
  const auto cc = costate_check(sol.trajectory, gamma);
  Json r;
  r["cost"] = json_number(sol.cost);
  r["cost_plus"] = json_number(sol.plus.cost);
  r["cost_minus"] = json_number(sol.minus.cost);
  r["cost_split_residual"] = json_number(sol.split_residual);
  r["theta1_residual"] = json_number(sol.theta1_residual);
  r["theta2_residual"] = json_number(sol.theta2_residual);
  r["plus_minus_residual"] = json_number(sol.pm_residual);
  r["sensitivity_norm2"] = json_number(two_qubit_sensitivity(sol.trajectory));
  r["costate"] = {{"max_state_deviation", json_number(cc.max_state_deviation)},
                  {"max_control_deviation", json_number(cc.max_control_deviation)},
                  {"max_lambda_final", json_number(cc.max_lambda_final)},
                  {"max_a_drift", json_number(cc.max_a_drift)}};
  if (!sol.note.empty()) r["note"] = sol.note;
  const bool passed = sol.split_residual < kVerifyTol && std::abs(sol.theta1_residual) < kVerifyTol &&
                      std::abs(sol.theta2_residual) < kVerifyTol && cc.max_lambda_final < kVerifyTol &&
                      cc.max_control_deviation < kVerifyTol;
  r["passed"] = passed;
  run.write_json("report.json", r);
  run.finish(cfg);
  std::cout << r.dump(2) << "\n";
  return passed ? kExitOk : kExitVerify;
}

// Least-squares a_z, a_x from u^2/2 + a_z/2 cos 2th + a_x/2 sin 2th = c^2/2 + a_z/2.
ExtremalParams fit_constants(const Trajectory& traj, double gamma) {
  const double c = traj.samples.front().u;
  double m00 = 0, m01 = 0, m11 = 0, b0 = 0, b1 = 0;
  for (const auto& s : traj.samples) {
    const double x0 = 0.5 * (std::cos(2.0 * s.theta) - 1.0);
    const double x1 = 0.5 * std::sin(2.0 * s.theta);
    const double y = 0.5 * (c * c - s.u * s.u);
    m00 += x0 * x0;
    m01 += x0 * x1;
    m11 += x1 * x1;
    b0 += x0 * y;
    b1 += x1 * y;
  }
  ExtremalParams p;
  p.c = c;
  const double det = m00 * m11 - m01 * m01;
  const double scale = std::max({m00, m11, 1e-300});
  if (std::abs(det) > 1e-12 * scale * scale) {
    p.a_z = (m11 * b0 - m01 * b1) / det;
    p.a_x = (m00 * b1 - m01 * b0) / det;
  } else if (m00 > 1e-300 || m11 > 1e-300) {
    // theta stays on a line where one column vanishes; fit the other alone.
    if (m00 >= m11) p.a_z = b0 / m00;
    else p.a_x = b1 / m11;
  }
  p.gamma = gamma;
  p.s_z_final = traj.final().s_z;
  p.s_x_final = traj.final().s_x;
  return p;
}

int cmd_verify(const std::string& input, double gamma, std::optional<double> theta_des,
               const std::string& out_dir, const QuadConfig& cfg) {
  std::ifstream in(input);
  if (!in) throw UsageError("cannot open " + input);
  Trajectory traj = read_trajectory_csv(in);
  traj.gamma = gamma;
  if (theta_des) traj.theta_des = *theta_des;
  traj.endpoint_residuals = {traj.final().theta - traj.theta_des, 0.0, 0.0};
  Run run("verify", out_dir);
  run.spec = {{"input", input}, {"gamma", json_number(gamma)}};
  if (theta_des) run.spec["theta_des"] = json_number(*theta_des);

  const ExtremalParams fitted = fit_constants(traj, gamma);
  Json r;
  r["samples"] = traj.samples.size();
  r["theta_des"] = json_number(traj.theta_des);
  r["endpoint_residuals"] = residuals_json(traj.endpoint_residuals);
  bool passed = std::abs(traj.endpoint_residuals.d_theta) < kVerifyTol;
  if (traj.uniform()) {
    const auto sym = verify_symmetry(traj);
    r["symmetry_residuals"] = symmetry_json(sym);
    passed = passed && sym.max_abs() < kVerifyTol;
  } else {
    r["symmetry_residuals"] = nullptr;
    passed = false;
  }
  r["u0_minus_uT"] = json_number(traj.samples.front().u - traj.final().u);
  const double rel = relation_residual(traj);
  r["relation_residual"] = json_number(rel);
  const double com = conserved_residual(traj, fitted);
  r["fitted_constants"] = {{"a_z", json_number(fitted.a_z)}, {"a_x", json_number(fitted.a_x)}};
  r["conserved_residual"] = json_number(com);
  r["energy"] = json_number(energy_of(traj));
  r["cost"] = json_number(cost_of(traj, gamma));
  r["sensitivity_cost_endpoint"] = json_number(sensitivity_cost_of(traj));
  r["sensitivity_cost_integral"] = json_number(sensitivity_cost_lagrange(traj));
  passed = passed && rel < kVerifyTol && com < kVerifyTol;
  r["tolerance"] = kVerifyTol;
  r["passed"] = passed;
  run.write_json("verify.json", r);
  run.finish(cfg);
  std::cout << r.dump(2) << "\n";
  return passed ? kExitOk : kExitVerify;
}

BipartiteModel load_model(const std::string& name) {
  if (name == "dephasing") return BipartiteModel::dephasing();
  if (name == "cross_talk") return BipartiteModel::cross_talk();
  if (name.rfind("random:", 0) == 0) {
    const double seed = parse_number(name.substr(7), "random seed");
    if (seed < 0 || seed != std::floor(seed)) throw ParseError("random seed must be a non-negative integer");
    return BipartiteModel::random(static_cast<std::uint64_t>(seed));
  }
  std::ifstream in(name);
  if (!in) throw ParseError("cannot open model file " + name);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  return model_from_json(j);
}

struct SensitivityArgs {
  std::string model = "dephasing";
  std::string control;
  std::size_t order = 1;
  std::size_t steps = 1000;
  std::string out = ".";
  bool validate = false;
  bool full = false;
  double delta = 1e-3;
  double epsilon = 1e-3;
};

int cmd_sensitivity(const SensitivityArgs& a, const QuadConfig& cfg) {
  if (a.order < 1 || a.order > 4) throw UsageError("--order must be between 1 and 4");
  BipartiteModel model = load_model(a.model);
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SampledControl control;
  if (a.control.empty()) {
    control = SampledControl::constant(0.5 * kPi, 1.0);
    control.u.assign(std::max<std::size_t>(1, model.controls.size()), control.u[0]);
  } else {
    std::ifstream in(a.control);
    if (!in) throw UsageError("cannot open control file " + a.control);
    control = read_control_csv(in);
  }
  Run run("sensitivity", a.out);
  run.spec = {{"model", a.model}, {"control", a.control.empty() ? Json("constant pi/2") : Json(a.control)},
              {"order", a.order}, {"steps", a.steps}};
  const SensitivityTensor z = propagate_sensitivity(model, control, a.order, a.steps);
  Json r;
  r["horizon_T"] = json_number(control.horizon());
  r["norms"] = Json::array();
  for (const auto& [key, m] : z.entries) {
    Json row = {{"n", key.first}, {"j", key.second}, {"norm2", json_number(norm2(m))}};
    if (a.full) row["matrix"] = matrix_to_json(m);
    r["norms"].push_back(row);
  }
  bool passed = true;
  if (a.validate) {
    const auto v = validate_taylor(model, control, z, a.delta, a.epsilon, a.steps);
    r["validation"] = {{"delta", json_number(v.delta)}, {"epsilon", json_number(v.eps)},
                       {"order", v.order}, {"residual", json_number(v.residual)}};
    passed = v.residual < 1e-8;
    r["validation"]["passed"] = passed;
  }
  run.write_json("sensitivity.json", r);
  run.finish(cfg);
  std::cout << r.dump(2) << "\n";
  return passed ? kExitOk : kExitVerify;
}

int cmd_quad(const std::string& kind, double k, int m, const std::string& out_dir, const QuadConfig& cfg) {
  QuadKernel kernel{kernel_kind_from_string(kind), m, k};
  const double value = evaluate(kernel, cfg);
  Json r = {{"kind", kind}, {"k", json_number(k)}};
  if (m > 0) r["m"] = m;
  r["value"] = json_number(value);
  Run run("quad", out_dir);
  run.spec = {{"kind", kind}, {"k", json_number(k)}, {"m", m}};
  run.write_json("quad.json", r);
  run.finish(cfg);
  std::cout << r.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and verification of sensitivity-minimizing qubit pulses"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem instance and verify the extremal");
  solve_cmd->add_option("--theta-des", solve_args.theta_des, "Target angle (rad)")->required();
  solve_cmd->add_option("--gamma", solve_args.gamma, "Sensitivity weight")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--horizon", solve_args.horizon, "Final time T")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--steps", solve_args.steps, "RK4 steps for the emitted trajectory")->check(CLI::Range(100, 100000000));
  solve_cmd->add_option("--continuation-steps", solve_args.continuation, "Minimum gamma ladder length")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve_args.out, "Output directory");
  solve_cmd->add_option("--format", solve_args.format, "Trajectory format")->check(CLI::IsMember({"csv", "json"}));

  std::size_t limit_steps = 10000;
  std::string limit_out = ".";
  std::string limit_format = "csv";
  auto* limit_cmd = app.add_subcommand("limit", "Solution of the zero-sensitivity limit (gamma -> infinity)");
  limit_cmd->add_option("--steps", limit_steps, "RK4 steps")->check(CLI::Range(100, 100000000));
  limit_cmd->add_option("--out", limit_out, "Output directory");
  limit_cmd->add_option("--format", limit_format, "Trajectory format")->check(CLI::IsMember({"csv", "json"}));

  std::string grid;
  double sweep_theta = 0.5 * kPi;
  double sweep_horizon = 1.0;
  std::size_t sweep_continuation = 30;
  std::string sweep_out = ".";
  auto* sweep_cmd = app.add_subcommand("sweep", "Cost against gamma with bound checks");
  sweep_cmd->add_option("--gamma-grid", grid, "a,b,c | geom:a:b:n | lin:a:b:n")->required();
  sweep_cmd->add_option("--theta-des", sweep_theta, "Target angle (rad), default pi/2");
  sweep_cmd->add_option("--horizon", sweep_horizon, "Final time T")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--continuation-steps", sweep_continuation, "Minimum gamma ladder length")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "Output directory");

  double theta1 = 0.0, theta2 = 0.0, tq_gamma = 0.0, tq_horizon = 1.0;
  std::size_t tq_steps = 10000;
  std::string tq_out = ".";
  auto* tq_cmd = app.add_subcommand("two-qubit", "Two-qubit cross-talk problem via the +/- split");
  tq_cmd->add_option("--theta1", theta1, "Target angle of qubit 1")->required();
  tq_cmd->add_option("--theta2", theta2, "Target angle of qubit 2")->required();
  tq_cmd->add_option("--gamma", tq_gamma, "Sensitivity weight")->check(CLI::NonNegativeNumber);
  tq_cmd->add_option("--horizon", tq_horizon, "Final time T")->check(CLI::PositiveNumber);
  tq_cmd->add_option("--steps", tq_steps, "RK4 steps")->check(CLI::Range(100, 100000000));
  tq_cmd->add_option("--out", tq_out, "Output directory");

  std::string verify_input;
  double verify_gamma = 0.0;
  std::optional<double> verify_theta;
  std::string verify_out = ".";
  auto* verify_cmd = app.add_subcommand("verify", "Re-run the extremal checks on a trajectory CSV");
  verify_cmd->add_option("--input", verify_input, "Trajectory CSV (t,theta,u,S_z,S_x)")->required();
  verify_cmd->add_option("--gamma", verify_gamma, "Sensitivity weight for the cost")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--theta-des", verify_theta, "Target angle; default: final theta");
  verify_cmd->add_option("--out", verify_out, "Output directory");

  SensitivityArgs sens;
  auto* sens_cmd = app.add_subcommand("sensitivity", "Sensitivity functions Z^n_j(T) of a bipartite model");
  sens_cmd->add_option("--model", sens.model, "dephasing | cross_talk | random:SEED | model.json");
  sens_cmd->add_option("--control", sens.control, "Control CSV (t,u1[,u2...]); default constant pi/2 on [0,1]");
  sens_cmd->add_option("--order", sens.order, "Highest order n (1..4)");
  sens_cmd->add_option("--steps", sens.steps, "RK4 steps")->check(CLI::PositiveNumber);
  sens_cmd->add_option("--out", sens.out, "Output directory");
  sens_cmd->add_flag("--validate", sens.validate, "Compare the Taylor sum with direct integration");
  sens_cmd->add_flag("--full", sens.full, "Also write the matrices");
  sens_cmd->add_option("--delta", sens.delta, "delta for --validate");
  sens_cmd->add_option("--epsilon", sens.epsilon, "epsilon for --validate");

  std::string quad_kind;
  double quad_k = 0.0;
  int quad_m = 0;
  std::string quad_out = ".";
  auto* quad_cmd = app.add_subcommand("quad", "Evaluate one quadrature kernel");
  quad_cmd->add_option("--kind", quad_kind, "I | J | A | B | Im | Jm | Ipm | Jpm")->required();
  quad_cmd->add_option("--k", quad_k, "Parameter k")->required();
  quad_cmd->add_option("--m", quad_m, "Switch count for the m-kernels");
  quad_cmd->add_option("--out", quad_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const QuadConfig cfg = quad_config_from_env();
    if (*solve_cmd) {
      if (!std::isfinite(solve_args.theta_des)) throw UsageError("--theta-des must be finite");
      return cmd_solve(solve_args, cfg);
    }
    if (*limit_cmd) return cmd_limit(limit_steps, limit_out, limit_format, cfg);
    if (*sweep_cmd) return cmd_sweep(grid, sweep_theta, sweep_horizon, sweep_continuation, sweep_out, cfg);
    if (*tq_cmd) return cmd_two_qubit(theta1, theta2, tq_gamma, tq_horizon, tq_steps, tq_out, cfg);
    if (*verify_cmd) return cmd_verify(verify_input, verify_gamma, verify_theta, verify_out, cfg);
    if (*sens_cmd) return cmd_sensitivity(sens, cfg);
    if (*quad_cmd) return cmd_quad(quad_kind, quad_k, quad_m, quad_out, cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
