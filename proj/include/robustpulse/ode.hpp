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

#ifndef ROBUSTPULSE_ODE_HPP
#define ROBUSTPULSE_ODE_HPP

#include <array>
#include <cstddef>

namespace robustpulse {

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& k) {
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

}  // namespace detail

/// One classical RK4 step of y' = f(t, y).
template <std::size_t N, class F>
State<N> rk4_step(F&& f, double t, const State<N>& y, double h) {
  const State<N> k1 = f(t, y);
  const State<N> k2 = f(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
  const State<N> k3 = f(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
  const State<N> k4 = f(t + h, detail::axpy(y, h, k3));
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

/// Fixed-step RK4 from t0 over n steps of size h; `observe(i, t, y)` sees every node.
template <std::size_t N, class F, class Observe>
State<N> rk4_integrate(F&& f, double t0, State<N> y, double h, std::size_t n, Observe&& observe) {
  observe(std::size_t{0}, t0, y);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    y = rk4_step(f, t, y, h);
    observe(i + 1, t0 + static_cast<double>(i + 1) * h, y);
  }
  return y;
}

}  // namespace robustpulse

#endif  // ROBUSTPULSE_ODE_HPP
