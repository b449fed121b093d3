// Copyright 2026 The annealvi Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "annealvi/diffmath/gaussian.hpp"
#include "annealvi/errors.hpp"

namespace annealvi {

// Preconditioned Langevin map: z + eta * grad + sqrt(2 eta) * u, elementwise.
// `grad` is the gradient of the target log-density at z.
template <class T>
Vec<T> langevin_map(const Vec<T>& z, const Vec<T>& grad, const Vec<T>& eta,
                    const Vec<double>& u) {
  require_same_size(z.size(), grad.size(), "langevin_map gradient");
  require_same_size(z.size(), eta.size(), "langevin_map step size");
  require_same_size(z.size(), u.size(), "langevin_map noise");
  Vec<T> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i] + eta[i] * grad[i] + sqrt(2.0 * eta[i]) * u[i];
  }
  return out;
}

// Drifted mean z + eta * grad of the unadjusted Langevin transition.
template <class T>
Vec<T> langevin_drift(const Vec<T>& z, const Vec<T>& grad, const Vec<T>& eta) {
  require_same_size(z.size(), grad.size(), "langevin_drift gradient");
  require_same_size(z.size(), eta.size(), "langevin_drift step size");
  Vec<T> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] + eta[i] * grad[i];
  return out;
}

// log N(z_to; z_from + eta * grad_from, 2 eta), the ULA transition density.
template <class T>
T ula_logdensity(const Vec<T>& z_from, const Vec<T>& grad_from, const Vec<T>& z_to,
                 const Vec<T>& eta) {
  const Vec<T> mean = langevin_drift(z_from, grad_from, eta);
  Vec<T> var(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!(value_of(eta[i]) > 0.0)) throw std::domain_error("ula_logdensity: eta must be positive");
    var[i] = 2.0 * eta[i];
  }
  return gaussian_logpdf(z_to, mean, var);
}

// Solves langevin_map(z, grad(z), eta, u) = y for z by the fixed-point
// iteration z <- y - sqrt(2 eta) u - eta grad(z). This contracts when
// eta * L < 1 for an L-smooth log-density; otherwise DivergenceError.
inline Vec<double> invert_langevin_map(
    const Vec<double>& y, const Vec<double>& u, const Vec<double>& eta,
    const std::function<Vec<double>(const Vec<double>&)>& grad_log_target,
    double tol = 1e-12, int max_iterations = 1000) {
  require_same_size(y.size(), u.size(), "invert_langevin_map noise");
  require_same_size(y.size(), eta.size(), "invert_langevin_map step size");
  Vec<double> base(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) base[i] = y[i] - std::sqrt(2.0 * eta[i]) * u[i];
  Vec<double> z = base;
  for (int it = 0; it < max_iterations; ++it) {
    const Vec<double> g = grad_log_target(z);
    double step = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double next = base[i] - eta[i] * g[i];
      step = std::max(step, std::abs(next - z[i]));
      scale = std::max(scale, std::abs(next));
      z[i] = next;
    }
    if (!std::isfinite(step) || step > 1e150) break;
    if (step <= tol * scale) return z;
  }
  throw DivergenceError("invert_langevin_map: fixed-point iteration did not converge "
                        "(step size too large for the target's smoothness?)");
}

}  // namespace annealvi
