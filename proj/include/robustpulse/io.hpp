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

#ifndef ROBUSTPULSE_IO_HPP
#define ROBUSTPULSE_IO_HPP

/**
 * @file io.hpp
 * @brief CSV/JSON formats shared by the CLI and the tests.
 *
 * Numbers are written with 12 significant digits so identical runs give
 * byte-identical files. Non-finite values are "inf"/"nan" in CSV and null in
 * JSON.
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "robustpulse/dynamics.hpp"
#include "robustpulse/errors.hpp"
#include "robustpulse/quadrature.hpp"
#include "robustpulse/sensitivity.hpp"
#include "robustpulse/twoqubit.hpp"
#include "robustpulse/types.hpp"

namespace robustpulse {

using Json = nlohmann::ordered_json;

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// JSON value rounded to 12 significant digits; null when not finite.
inline Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

inline double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("cannot parse " + what + " '" + text + "' as a number");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw ParseError("trailing characters in " + what + " '" + text + "'");
  return value;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::vector<std::vector<double>> read_table(std::istream& in,
                                                   const std::vector<std::string>& expected_header,
                                                   std::vector<std::string>* header_out = nullptr) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");
  const auto header = split(line, ',');
  if (!expected_header.empty() && header != expected_header) {
    std::string want;
    for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
    throw ParseError("CSV header must be '" + want + "', got '" + line + "'");
  }
  if (header_out != nullptr) *header_out = header;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << header.size() << " fields, got " << fields.size();
      throw ParseError(msg.str());
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_number(f, "CSV field on line " + std::to_string(line_no)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,theta,u,S_z,S_x\n";
  for (const auto& s : traj.samples) {
    out << format_number(s.t) << ',' << format_number(s.theta) << ',' << format_number(s.u) << ','
        << format_number(s.s_z) << ',' << format_number(s.s_x) << '\n';
  }
}

/// Reads t,theta,u,S_z,S_x. theta_des defaults to the final theta.
inline Trajectory read_trajectory_csv(std::istream& in) {
  const auto rows = detail::read_table(in, {"t", "theta", "u", "S_z", "S_x"});
  if (rows.size() < 2) throw ParseError("trajectory needs at least two rows");
  Trajectory traj;
  for (const auto& r : rows) traj.samples.push_back({r[0], r[1], r[2], r[3], r[4]});
  try {
    traj.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  traj.theta_des = traj.samples.back().theta;
  return traj;
}

inline void write_two_qubit_csv(std::ostream& out, const TwoQubitTrajectory& traj) {
  out << "t,theta1,theta2,u1,u2,S_zz,S_zx,S_xz,S_xx\n";
  for (const auto& s : traj.samples) {
    out << format_number(s.t) << ',' << format_number(s.theta1) << ',' << format_number(s.theta2)
        << ',' << format_number(s.u1) << ',' << format_number(s.u2) << ',' << format_number(s.s_zz)
        << ',' << format_number(s.s_zx) << ',' << format_number(s.s_xz) << ','
        << format_number(s.s_xx) << '\n';
  }
}

/// First column t, then one column per control channel.
inline SampledControl read_control_csv(std::istream& in) {
  std::vector<std::string> header;
  const auto rows = detail::read_table(in, {}, &header);
  if (header.size() < 2 || header[0] != "t") {
    throw ParseError("control CSV header must start with 't' and name at least one channel");
  }
  SampledControl c;
  c.u.assign(header.size() - 1, {});
  for (const auto& r : rows) {
    c.t.push_back(r[0]);
    for (std::size_t k = 1; k < r.size(); ++k) c.u[k - 1].push_back(r[k]);
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  return c;
}

inline Json to_json(const Regime& r) { return to_string(r); }

inline Json to_json(const ExtremalParams& p) {
  Json j;
  j["c"] = json_number(p.c);
  j["S_z_final"] = json_number(p.s_z_final);
  j["S_x_final"] = json_number(p.s_x_final);
  j["a_z"] = json_number(p.a_z);
  j["a_x"] = json_number(p.a_x);
  j["k"] = json_number(p.k);
  j["a"] = json_number(p.a());
  j["regime"] = to_json(p.regime);
  j["cost"] = json_number(p.cost);
  j["theta_des"] = json_number(p.theta_des);
  j["gamma"] = json_number(p.gamma);
  j["horizon_T"] = json_number(p.horizon_T);
  j["optimality_claimed"] = p.optimality_claimed;
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

inline Json to_json(const QuadConfig& cfg) {
  Json j;
  j["abs_tol"] = json_number(cfg.abs_tol);
  j["rel_tol"] = json_number(cfg.rel_tol);
  j["max_subdivisions"] = cfg.max_subdivisions;
  return j;
}

/**
 * ROBUSTPULSE_TOL = "<tol>" sets both tolerances, "<abs>,<rel>" sets them
 * separately. Unset leaves the defaults.
 */
inline QuadConfig quad_config_from_env(const char* name = "ROBUSTPULSE_TOL") {
  QuadConfig cfg;
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return cfg;
  const auto parts = detail::split(raw, ',');
  if (parts.size() == 1) {
    cfg.abs_tol = cfg.rel_tol = parse_number(parts[0], name);
  } else if (parts.size() == 2) {
    cfg.abs_tol = parse_number(parts[0], name);
    cfg.rel_tol = parse_number(parts[1], name);
  } else {
    throw ParseError(std::string(name) + " must be '<tol>' or '<abs>,<rel>'");
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

/// "a,b,c", "geom:a:b:n" (n points, geometric) or "lin:a:b:n".
inline std::vector<double> parse_gamma_grid(const std::string& text) {
  std::vector<double> out;
  if (text.rfind("geom:", 0) == 0 || text.rfind("lin:", 0) == 0) {
    const auto parts = detail::split(text, ':');
    if (parts.size() != 4) throw ParseError("grid '" + text + "' must be kind:start:stop:count");
    const double a = parse_number(parts[1], "grid start");
    const double b = parse_number(parts[2], "grid stop");
    const double n_real = parse_number(parts[3], "grid count");
    if (!(n_real >= 1.0) || n_real != std::floor(n_real)) throw ParseError("grid count must be a positive integer");
    const auto n = static_cast<std::size_t>(n_real);
    const bool geometric = parts[0] == "geom";
    if (geometric && !(a > 0.0 && b > 0.0)) throw ParseError("geometric grid needs positive endpoints");
    for (std::size_t i = 0; i < n; ++i) {
      const double w = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(geometric ? a * std::pow(b / a, w) : a + (b - a) * w);
    }
  } else {
    for (const auto& f : detail::split(text, ',')) out.push_back(parse_number(f, "gamma"));
  }
  if (out.empty()) throw ParseError("empty gamma grid");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] >= 0.0)) throw ParseError("gamma values must be >= 0");
    if (i > 0 && out[i] < out[i - 1]) throw ParseError("gamma grid must be ascending");
  }
  return out;
}

namespace detail {

inline Complex parse_entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ParseError("matrix entries must be numbers or [re, im] pairs");
}

inline Matrix parse_matrix(const Json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix '" + name + "' must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix '" + name + "' has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_entry(j[r][c]);
  }
  return m;
}

}  // namespace detail

/**
 * {"dim_S", "dim_E", "drift", "controls": [...], "H", "H1", "H2", "H_E"},
 * matrices row-major with real or [re, im] entries. Missing H1/H2/H_E/drift
 * default to zero.
 */
inline BipartiteModel model_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("model must be a JSON object");
  BipartiteModel m;
  try {
    m.dim_S = j.at("dim_S").get<std::size_t>();
    m.dim_E = j.value("dim_E", std::size_t{1});
  } catch (const std::exception& e) {
    throw ParseError(std::string("model dimensions: ") + e.what());
  }
  auto get = [&](const char* key, std::size_t d) {
    if (!j.contains(key)) return Matrix(Matrix::Zero(d, d));
    return detail::parse_matrix(j[key], key);
  };
  m.drift = get("drift", m.dim_S);
  if (j.contains("controls")) {
    for (const auto& c : j["controls"]) m.controls.push_back(detail::parse_matrix(c, "controls"));
  }
  if (!j.contains("H")) throw ParseError("model needs the uncertainty direction 'H'");
  m.H = get("H", m.dim_S);
  m.H1 = get("H1", m.dim_S);
  m.H2 = get("H2", m.dim_E);
  m.H_E = get("H_E", m.dim_E);
  return m;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({json_number(m(r, c).real()), json_number(m(r, c).imag())}));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_IO_HPP
