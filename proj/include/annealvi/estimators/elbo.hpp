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

#include "annealvi/annealing/bridge.hpp"
#include "annealvi/estimators/trajectory.hpp"

namespace annealvi {

// Single-sample reparameterised ELBO: log p(x, z0) - log q(z0|x), z0 = mu + std * u0.
template <template <class> class Model, class T>
T elbo_vae(const Problem<Model, T>& problem, const Vec<double>& x, const Vec<double>& u0) {
  const Bridge<Model, T> bridge(problem, x);
  return bridge.at(reparam_sample(bridge.encoded(), u0), false).log_ratio();
}

// Importance-weighted bound log((1/n) sum_i p(x, z_i) / q(z_i|x)).
template <template <class> class Model, class T>
T iwae(const Problem<Model, T>& problem, const Vec<double>& x,
       const std::vector<Vec<double>>& u0s) {
  if (u0s.empty()) throw std::invalid_argument("iwae: need at least one sample");
  const Bridge<Model, T> bridge(problem, x);
  Vec<T> log_w;
  log_w.reserve(u0s.size());
  for (const auto& u0 : u0s) {
    log_w.push_back(bridge.at(reparam_sample(bridge.encoded(), u0), false).log_ratio());
  }
  return log_mean_exp(log_w);
}

}  // namespace annealvi
