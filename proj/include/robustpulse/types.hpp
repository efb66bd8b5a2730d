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

#ifndef ROBUSTPULSE_TYPES_HPP
#define ROBUSTPULSE_TYPES_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "robustpulse/elliptic.hpp"
#include "robustpulse/errors.hpp"

namespace robustpulse {

inline constexpr double kPi = std::numbers::pi;

/// One instance of the weighted energy + sensitivity problem.
struct ProblemSpec {
  double theta_des = 0.0;
  double horizon_T = 1.0;
  double gamma = 0.0;

  void validate() const {
    if (!std::isfinite(theta_des)) throw DomainError("ProblemSpec: theta_des must be finite");
    if (!(horizon_T > 0.0) || !std::isfinite(horizon_T)) {
      throw DomainError("ProblemSpec: horizon_T must be finite and > 0");
    }
    if (!(gamma >= 0.0)) throw DomainError("ProblemSpec: gamma must be >= 0");
  }
};

enum class RegimeKind { no_switch, one_pair_switch, m_switch };

struct Regime {
  RegimeKind kind = RegimeKind::no_switch;
  int m = 0;  // number of switch pairs; 0 for no_switch, 1 for one_pair_switch
  SwitchFamily sign = SwitchFamily::minus;

  static Regime no_switch() { return {}; }
  static Regime one_pair_switch() { return {RegimeKind::one_pair_switch, 1, SwitchFamily::minus}; }
  static Regime m_switch(int m, SwitchFamily sign) { return {RegimeKind::m_switch, m, sign}; }

  bool operator==(const Regime&) const = default;
};

inline std::string to_string(const Regime& regime) {
  switch (regime.kind) {
    case RegimeKind::no_switch:
      return "no_switch";
    case RegimeKind::one_pair_switch:
      return "one_pair_switch";
    case RegimeKind::m_switch: {
      std::ostringstream out;
      out << "m_switch(" << regime.m << "," << (regime.sign == SwitchFamily::minus ? "minus" : "plus")
          << ")";
      return out.str();
    }
  }
  return "?";
}

/**
 * Finite parameterization of an extremal: initial control c, final
 * sensitivities, the constants a_z = -2 gamma S_z(T), a_x = -2 gamma S_x(T),
 * and the elliptic parameter k where one exists (infinity at gamma = 0, NaN
 * when the solution does not come from the closed-form branches).
 */
struct ExtremalParams {
  double c = 0.0;
  double s_z_final = 0.0;
  double s_x_final = 0.0;
  double a_z = 0.0;
  double a_x = 0.0;
  double k = std::numeric_limits<double>::quiet_NaN();
  Regime regime;
  double cost = 0.0;

  double theta_des = 0.0;  // endpoint actually reached by the control (lifts included)
  double gamma = 0.0;
  double horizon_T = 1.0;
  bool optimality_claimed = true;
  std::string note;

  /// a = 2 gamma S for the NOT gate, where S_z(T) = 0.
  double a() const { return -a_x; }
  double sensitivity_norm2() const { return s_z_final * s_z_final + s_x_final * s_x_final; }
};

}  // namespace robustpulse

#endif  // ROBUSTPULSE_TYPES_HPP
