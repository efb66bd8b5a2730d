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

#ifndef ROBUSTPULSE_ERRORS_HPP
#define ROBUSTPULSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robustpulse {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative procedure (quadrature, root bracketing) did not meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shooting/continuation gave up. Carries the last bracket and residuals seen.
class NoConvergence : public ConvergenceError {
 public:
  NoConvergence(const std::string& what, double gamma_reached, double gamma_target,
                double residual_theta, double residual_sensitivity)
      : ConvergenceError(what),
        gamma_reached(gamma_reached),
        gamma_target(gamma_target),
        residual_theta(residual_theta),
        residual_sensitivity(residual_sensitivity) {}

  double gamma_reached;
  double gamma_target;
  double residual_theta;
  double residual_sensitivity;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonHermitian : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two sampled signals that must share a time grid do not.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed external input (CSV/JSON).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace robustpulse

#endif  // ROBUSTPULSE_ERRORS_HPP
