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

#include <cmath>

#include "annealvi/annealing/bridge.hpp"
#include "annealvi/estimators/trajectory.hpp"
#include "annealvi/kernels/langevin.hpp"

namespace annealvi {

// Sequential importance sampling with unadjusted Langevin forward kernels
// m_k targeting gamma_k and backward kernels equal to m_k:
//
//   W = -log q(z0|x) + sum_k [log m_k(z_k, z_{k-1}) - log m_k(z_{k-1}, z_k)]
//       + log p(x, z_K),   z_k = T_{k,u_k}(z_{k-1}).
//
// Every state is a differentiable function of (u_0, u_{1:K}), so with T = Var
// W carries pathwise gradients w.r.t. the model, encoder, eta and schedule.
// The MALA acceptance probability of each move is recorded (never applied)
// in accept_prob_sum for step-size adaptation.
template <template <class> class Model, class T>
Trajectory<T> sis_estimate(const Problem<Model, T>& problem, const Vec<double>& x,
                           const ChainNoise& noise) {
  const Bridge<Model, T> bridge(problem, x);
  const std::size_t steps = bridge.steps();
  require_same_size(noise.u.size(), steps, "sis_estimate noise steps");
  if (noise.u0.empty()) throw std::invalid_argument("sis_estimate: missing initial noise");

  Trajectory<T> traj;
  traj.u = noise.u;
  traj.z.reserve(steps + 1);

  BridgePoint<T> cur = bridge.at(reparam_sample(bridge.encoded(), noise.u0.front()));
  traj.z.push_back(cur.z);
  T log_w = -cur.q.logp;
  for (std::size_t k = 1; k <= steps; ++k) {
    const T& beta = bridge.beta(k);
    const Vec<T> grad_from = cur.grad_log_gamma(beta);
    BridgePoint<T> next = bridge.at(langevin_map(cur.z, grad_from, bridge.eta(), noise.u[k - 1]));
    const Vec<T> grad_to = next.grad_log_gamma(beta);
    const T forward = ula_logdensity(cur.z, grad_from, next.z, bridge.eta());
    const T backward = ula_logdensity(next.z, grad_to, cur.z, bridge.eta());
    log_w += backward - forward;

    const double b = value_of(beta);
    const double log_ratio = (1.0 - b) * (value_of(next.q.logp) - value_of(cur.q.logp)) +
                             b * (value_of(next.p.logp) - value_of(cur.p.logp)) +
                             value_of(backward) - value_of(forward);
    traj.accept_prob_sum += std::exp(min_zero(log_ratio));

    traj.z.push_back(next.z);
    cur = std::move(next);
  }
  traj.log_w = log_w + cur.p.logp;
  return traj;
}

}  // namespace annealvi
