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
#include <string>
#include <string_view>

#include "annealvi/annealing/bridge.hpp"
#include "annealvi/estimators/trajectory.hpp"
#include "annealvi/kernels/metropolis.hpp"

namespace annealvi {

enum class AisKernel { kMala, kRwm };

inline AisKernel parse_ais_kernel(std::string_view s) {
  if (s == "mala") return AisKernel::kMala;
  if (s == "rwm") return AisKernel::kRwm;
  throw std::invalid_argument("unknown AIS kernel '" + std::string(s) + "'");
}

struct AisOptions {
  AisKernel kernel = AisKernel::kMala;
  // When set, replays the chain with these accept bits instead of drawing
  // them from noise.v.
  const std::vector<std::uint8_t>* forced_accepts = nullptr;
};

// Annealed importance sampling with gamma_k-reversible kernels. For
// k = 1..K:
//   W     += (beta_k - beta_{k-1}) (log p(x, z_{k-1}) - log q(z_{k-1}|x))
//   a_k    = [v_k < alpha_{k,u_k}(z_{k-1})]
//   log A += log alpha^{a_k}_{k,u_k}(z_{k-1})
//   z_k    = a_k ? T_{k,u_k}(z_{k-1}) : z_{k-1}
// The proposal map is the Langevin map (kMala) or z + sqrt(2 eta) u (kRwm).
// Given (u, a) the states are deterministic functions of z_0, which makes W
// and log A differentiable for T = Var.
template <template <class> class Model, class T>
Trajectory<T> ais_estimate(const Problem<Model, T>& problem, const Vec<double>& x,
                           const ChainNoise& noise, const AisOptions& options = {}) {
  const Bridge<Model, T> bridge(problem, x);
  const std::size_t steps = bridge.steps();
  require_same_size(noise.u.size(), steps, "ais_estimate noise steps");
  if (options.forced_accepts) {
    require_same_size(options.forced_accepts->size(), steps, "ais_estimate forced accepts");
  } else {
    require_same_size(noise.v.size(), steps, "ais_estimate accept draws");
  }
  if (noise.u0.empty()) throw std::invalid_argument("ais_estimate: missing initial noise");

  const bool mala = options.kernel == AisKernel::kMala;
  Vec<T> rwm_scale;
  if (!mala) {
    for (const T& e : bridge.eta()) rwm_scale.push_back(sqrt(2.0 * e));
  }

  Trajectory<T> traj;
  traj.u = noise.u;
  traj.z.reserve(steps + 1);
  traj.accepted.reserve(steps);

  BridgePoint<T> cur = bridge.at(reparam_sample(bridge.encoded(), noise.u0.front()), mala);
  traj.z.push_back(cur.z);
  T log_w = 0.0;
  T log_a = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const T& beta = bridge.beta(k);
    log_w += (beta - bridge.beta(k - 1)) * cur.log_ratio();

    T log_accept = 0.0;
    BridgePoint<T> next;
    if (mala) {
      const PointEval<T> at_from{cur.log_gamma(beta), cur.grad_log_gamma(beta)};
      next = bridge.at(langevin_map(cur.z, at_from.grad, bridge.eta(), noise.u[k - 1]));
      const PointEval<T> at_to{next.log_gamma(beta), next.grad_log_gamma(beta)};
      log_accept = mala_log_accept(cur.z, at_from, next.z, at_to, bridge.eta());
    } else {
      next = bridge.at(rwm_propose(cur.z, noise.u[k - 1], rwm_scale), false);
      log_accept = rwm_log_accept(cur.log_gamma(beta), next.log_gamma(beta));
    }

    const double alpha = std::exp(value_of(log_accept));
    const bool accepted = options.forced_accepts ? (*options.forced_accepts)[k - 1] != 0
                                                 : noise.v[k - 1] < alpha;
    traj.accept_prob_sum += alpha;
    traj.accepted.push_back(accepted ? 1 : 0);
    log_a += log_outcome_prob(log_accept, accepted);
    if (accepted) cur = std::move(next);
    traj.z.push_back(cur.z);
  }
  traj.log_w = log_w;
  traj.log_a = log_a;
  return traj;
}

}  // namespace annealvi
