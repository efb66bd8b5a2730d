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

#ifndef ROBUSTPULSE_SENSITIVITY_HPP
#define ROBUSTPULSE_SENSITIVITY_HPP

/**
 * @file sensitivity.hpp
 * @brief Sensitivity functions of a bipartite system
 *
 *   H_tot = (H_S(t) + delta H) x 1_E + 1_S x H_E + eps H1 x H2,
 *   H_S(t) = drift + sum_k u_k(t) controls[k].
 *
 * Z^n_j is the coefficient of delta^j eps^(n-j) / (j! (n-j)!) in the
 * interaction-picture propagator X_int = (X_S x X_E)^dagger X, and obeys
 *
 *   dZ^n_j/dt = -i [ j (H_int x 1) Z^(n-1)_(j-1) + (n-j) (H1_int x H2_int) Z^(n-1)_j ],
 *
 * with Z^0_0 = 1 and Z^n_j(0) = 0. X_S, X_E and every Z are advanced together
 * by one RK4 pass.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstddef>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "robustpulse/dynamics.hpp"
#include "robustpulse/errors.hpp"

namespace robustpulse {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

namespace pauli {

inline Matrix identity() { return Matrix::Identity(2, 2); }
inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// ||A||^2 = Tr(A A^dagger) / d, so the Pauli matrices have unit norm.
inline double norm2(const Matrix& a) {
  return a.squaredNorm() / static_cast<double>(a.rows());
}

struct BipartiteModel {
  std::size_t dim_S = 2;
  std::size_t dim_E = 1;
  Matrix drift;                  // dim_S x dim_S
  std::vector<Matrix> controls;  // dim_S x dim_S each, one per control channel
  Matrix H;                      // delta direction, dim_S x dim_S
  Matrix H1;                     // dim_S x dim_S
  Matrix H2;                     // dim_E x dim_E
  Matrix H_E;                    // dim_E x dim_E

  void validate(double tol = 1e-12) const {
    auto check = [tol](const Matrix& m, std::size_t d, const char* name) {
      if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d) {
        std::ostringstream msg;
        msg << "BipartiteModel: " << name << " must be " << d << "x" << d << ", got " << m.rows()
            << "x" << m.cols();
        throw DimensionMismatch(msg.str());
      }
      if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw NonHermitian(std::string("BipartiteModel: ") + name + " is not Hermitian");
      }
    };
    if (dim_S < 1 || dim_E < 1) throw DimensionMismatch("BipartiteModel: dimensions must be >= 1");
    if (dim_S > 8 || dim_E > 8) throw DimensionMismatch("BipartiteModel: dimensions must be <= 8");
    check(drift, dim_S, "drift");
    for (const auto& c : controls) check(c, dim_S, "control");
    check(H, dim_S, "H");
    check(H1, dim_S, "H1");
    check(H2, dim_E, "H2");
    check(H_E, dim_E, "H_E");
  }

  Matrix system_hamiltonian(const SampledControl& u, double t) const {
    Matrix h = drift;
    for (std::size_t k = 0; k < controls.size(); ++k) h += u.value(k, t) * controls[k];
    return h;
  }

  /// Single qubit, H_S = -u sigma_y so that X_S = exp(i theta sigma_y); dephasing H = sigma_z.
  static BipartiteModel dephasing() {
    BipartiteModel m;
    m.dim_S = 2;
    m.dim_E = 1;
    m.drift = Matrix::Zero(2, 2);
    m.controls = {-pauli::y()};
    m.H = pauli::z();
    m.H1 = Matrix::Zero(2, 2);
    m.H2 = Matrix::Zero(1, 1);
    m.H_E = Matrix::Zero(1, 1);
    return m;
  }

  /// Two qubits as one 4-level system, controls -sigma_y x 1 and -1 x sigma_y, H = sigma_z x sigma_z.
  static BipartiteModel cross_talk() {
    BipartiteModel m;
    m.dim_S = 4;
    m.dim_E = 1;
    m.drift = Matrix::Zero(4, 4);
    m.controls = {-kron(pauli::y(), pauli::identity()), -kron(pauli::identity(), pauli::y())};
    m.H = kron(pauli::z(), pauli::z());
    m.H1 = Matrix::Zero(4, 4);
    m.H2 = Matrix::Zero(1, 1);
    m.H_E = Matrix::Zero(1, 1);
    return m;
  }

  /// Qubit coupled to a qubit environment, every matrix a random Hermitian with entries O(scale).
  static BipartiteModel random(std::uint64_t seed, std::size_t channels = 1, double scale = 0.5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto herm = [&](std::size_t d) {
      Matrix a(d, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) a(i, j) = Complex(normal(rng), normal(rng));
      }
      return Matrix(0.5 * scale * (a + a.adjoint()));
    };
    BipartiteModel m;
    m.dim_S = 2;
    m.dim_E = 2;
    m.drift = herm(2);
    for (std::size_t k = 0; k < channels; ++k) m.controls.push_back(herm(2));
    m.H = herm(2);
    m.H1 = herm(2);
    m.H2 = herm(2);
    m.H_E = herm(2);
    return m;
  }
};

struct SensitivityTensor {
  std::size_t dim_S = 0;
  std::size_t dim_E = 0;
  std::size_t max_order = 0;
  std::map<std::pair<int, int>, Matrix> entries;  // (n, j) -> Z^n_j(T)
  Matrix X_S;                                     // nominal system propagator at T
  Matrix X_E;                                     // nominal environment propagator at T

  const Matrix& at(int n, int j) const {
    const auto it = entries.find({n, j});
    if (it == entries.end()) {
      std::ostringstream msg;
      msg << "SensitivityTensor: no entry Z^" << n << "_" << j;
      throw DomainError(msg.str());
    }
    return it->second;
  }

  /// sum over n <= order of Z^n_j delta^j eps^(n-j) / (j! (n-j)!), Z^0_0 = 1.
  Matrix taylor(double delta, double eps, std::size_t order) const {
    const std::size_t d = dim_S * dim_E;
    Matrix sum = Matrix::Identity(d, d);
    for (std::size_t n = 1; n <= std::min(order, max_order); ++n) {
      for (std::size_t j = 0; j <= n; ++j) {
        const double coef = std::pow(delta, static_cast<double>(j)) *
                            std::pow(eps, static_cast<double>(n - j)) /
                            (std::tgamma(static_cast<double>(j) + 1.0) *
                             std::tgamma(static_cast<double>(n - j) + 1.0));
        sum += coef * at(static_cast<int>(n), static_cast<int>(j));
      }
    }
    return sum;
  }
};

namespace detail {

// Flat RK4 state: [X_S, X_E, Z^1_0, Z^1_1, Z^2_0, ...].
struct SensState {
  std::vector<Matrix> m;

  SensState axpy(double h, const SensState& k) const {
    SensState out = *this;
    for (std::size_t i = 0; i < m.size(); ++i) out.m[i] += h * k.m[i];
    return out;
  }
};

inline std::size_t z_index(std::size_t n, std::size_t j) { return 2 + (n * (n + 1)) / 2 - 1 + j; }

}  // namespace detail

/**
 * Co-integrates X_S, X_E and Z^n_j for 1 <= n <= max_order over
 * [0, control.horizon()] in n_steps RK4 steps.
 */
inline SensitivityTensor propagate_sensitivity(const BipartiteModel& model,
                                               const SampledControl& control,
                                               std::size_t max_order, std::size_t n_steps) {
  model.validate();
  control.validate();
  if (max_order < 1) throw DomainError("propagate_sensitivity: max_order must be >= 1");
  if (n_steps < 1) throw DomainError("propagate_sensitivity: n_steps must be >= 1");
  if (control.channels() < model.controls.size()) {
    throw DimensionMismatch("propagate_sensitivity: control has fewer channels than the model");
  }
  const std::size_t dS = model.dim_S;
  const std::size_t dE = model.dim_E;
  const std::size_t d = dS * dE;
  const Complex minus_i(0.0, -1.0);
  const Matrix id_E = Matrix::Identity(dE, dE);

  detail::SensState y;
  y.m.push_back(Matrix::Identity(dS, dS));
  y.m.push_back(Matrix::Identity(dE, dE));
  for (std::size_t n = 1; n <= max_order; ++n) {
    for (std::size_t j = 0; j <= n; ++j) y.m.push_back(Matrix::Zero(d, d));
  }

  auto rhs = [&](double t, const detail::SensState& s) {
    detail::SensState ds;
    ds.m.resize(s.m.size());
    const Matrix& xs = s.m[0];
    const Matrix& xe = s.m[1];
    ds.m[0] = minus_i * model.system_hamiltonian(control, t) * xs;
    ds.m[1] = minus_i * model.H_E * xe;
    const Matrix h_int = kron(xs.adjoint() * model.H * xs, id_E);
    const Matrix h12_int = kron(xs.adjoint() * model.H1 * xs, xe.adjoint() * model.H2 * xe);
    for (std::size_t n = 1; n <= max_order; ++n) {
      for (std::size_t j = 0; j <= n; ++j) {
        Matrix acc = Matrix::Zero(d, d);
        auto prev = [&](std::size_t jj) -> Matrix {
          if (n == 1) return Matrix::Identity(d, d);  // Z^0_0
          return s.m[detail::z_index(n - 1, jj)];
        };
        if (j >= 1) acc += static_cast<double>(j) * h_int * prev(j - 1);
        if (n - j >= 1) acc += static_cast<double>(n - j) * h12_int * prev(j);
        ds.m[detail::z_index(n, j)] = minus_i * acc;
      }
    }
    return ds;
  };

  const double T = control.horizon();
  const double h = T / static_cast<double>(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = h * static_cast<double>(i);
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + 0.5 * h, y.axpy(0.5 * h, k1));
    const auto k3 = rhs(t + 0.5 * h, y.axpy(0.5 * h, k2));
    const auto k4 = rhs(t + h, y.axpy(h, k3));
    for (std::size_t q = 0; q < y.m.size(); ++q) {
      y.m[q] += h / 6.0 * (k1.m[q] + 2.0 * k2.m[q] + 2.0 * k3.m[q] + k4.m[q]);
    }
  }

  SensitivityTensor out;
  out.dim_S = dS;
  out.dim_E = dE;
  out.max_order = max_order;
  out.X_S = y.m[0];
  out.X_E = y.m[1];
  for (std::size_t n = 1; n <= max_order; ++n) {
    for (std::size_t j = 0; j <= n; ++j) {
      out.entries[{static_cast<int>(n), static_cast<int>(j)}] = y.m[detail::z_index(n, j)];
    }
  }
  return out;
}

/**
 * X_int(T, delta, eps) by direct integration of the full propagator at finite
 * (delta, eps), alongside the nominal X_S and X_E.
 */
inline Matrix interaction_propagator(const BipartiteModel& model, const SampledControl& control,
                                     double delta, double eps, std::size_t n_steps) {
  model.validate();
  control.validate();
  const std::size_t dS = model.dim_S;
  const std::size_t dE = model.dim_E;
  const Complex minus_i(0.0, -1.0);
  const Matrix id_S = Matrix::Identity(dS, dS);
  const Matrix id_E = Matrix::Identity(dE, dE);
  const Matrix static_part =
      kron(delta * model.H, id_E) + kron(id_S, model.H_E) + eps * kron(model.H1, model.H2);

  detail::SensState y;
  y.m = {Matrix::Identity(dS, dS), Matrix::Identity(dE, dE), Matrix::Identity(dS * dE, dS * dE)};
  auto rhs = [&](double t, const detail::SensState& s) {
    const Matrix hs = model.system_hamiltonian(control, t);
    detail::SensState ds;
    ds.m = {minus_i * hs * s.m[0], minus_i * model.H_E * s.m[1],
            minus_i * (kron(hs, id_E) + static_part) * s.m[2]};
    return ds;
  };
  const double T = control.horizon();
  const double h = T / static_cast<double>(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = h * static_cast<double>(i);
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + 0.5 * h, y.axpy(0.5 * h, k1));
    const auto k3 = rhs(t + 0.5 * h, y.axpy(0.5 * h, k2));
    const auto k4 = rhs(t + h, y.axpy(h, k3));
    for (std::size_t q = 0; q < y.m.size(); ++q) {
      y.m[q] += h / 6.0 * (k1.m[q] + 2.0 * k2.m[q] + 2.0 * k3.m[q] + k4.m[q]);
    }
  }
  return kron(y.m[0], y.m[1]).adjoint() * y.m[2];
}

struct TaylorValidation {
  double delta = 0.0;
  double eps = 0.0;
  std::size_t order = 0;
  double residual = 0.0;  // max-entry distance between Taylor sum and direct X_int
};

inline TaylorValidation validate_taylor(const BipartiteModel& model, const SampledControl& control,
                                        const SensitivityTensor& tensor, double delta, double eps,
                                        std::size_t n_steps) {
  const Matrix direct = interaction_propagator(model, control, delta, eps, n_steps);
  const Matrix series = tensor.taylor(delta, eps, tensor.max_order);
  return {delta, eps, tensor.max_order, (direct - series).cwiseAbs().maxCoeff()};
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_SENSITIVITY_HPP
