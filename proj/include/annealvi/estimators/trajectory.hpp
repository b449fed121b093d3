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
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "annealvi/diffmath/vector_ops.hpp"
#include "annealvi/random.hpp"

namespace annealvi {

// Parameter-free randomness of one chain. Drawn from a RandomStream in this
// order: u0[0], ..., u0[m-1]; then for k = 1..K: u_k, followed by v_k when
// uniforms are requested.
struct ChainNoise {
  std::vector<Vec<double>> u0;  // one entry per initial draw (IWAE uses several)
  std::vector<Vec<double>> u;   // u_1..u_K
  Vec<double> v;                // v_1..v_K, accept draws in [0, 1)
};

inline ChainNoise draw_chain_noise(RandomStream& rng, std::size_t latent, std::size_t steps,
                                   bool uniforms, std::size_t initial_draws = 1) {
  ChainNoise n;
  n.u0.reserve(initial_draws);
  for (std::size_t i = 0; i < initial_draws; ++i) n.u0.push_back(rng.normal_vector(latent));
  n.u.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    n.u.push_back(rng.normal_vector(latent));
    if (uniforms) n.v.push_back(rng.uniform());
  }
  return n;
}

// One realisation of an SIS or AIS chain.
template <class T>
struct Trajectory {
  std::vector<Vec<T>> z;             // z_0..z_K
  std::vector<Vec<double>> u;        // u_1..u_K
  std::vector<std::uint8_t> accepted;  // a_1..a_K (AIS only)
  T log_w = 0.0;                     // accumulated log-weight W
  T log_a = 0.0;                     // sum of log alpha^{a_k} (AIS only)
  // Sum over k of the acceptance probability: the actual MALA/RWM
  // probability for AIS, the shadow MALA probability for SIS.
  double accept_prob_sum = 0.0;

  std::size_t steps() const { return u.size(); }
  std::size_t accept_count() const {
    return static_cast<std::size_t>(std::count(accepted.begin(), accepted.end(), 1));
  }
  double mean_accept_prob() const {
    return steps() == 0 ? 1.0 : accept_prob_sum / static_cast<double>(steps());
  }
};

// log((1/n) sum exp(a_i)), shifted by the max for stability.
template <class T>
T log_mean_exp(const Vec<T>& a) {
  if (a.empty()) throw std::invalid_argument("log_mean_exp: empty input");
  double shift = -std::numeric_limits<double>::infinity();
  for (const T& v : a) shift = std::max(shift, value_of(v));
  if (!std::isfinite(shift)) return T(shift);
  T acc = 0.0;
  for (const T& v : a) acc += exp(v - shift);
  return log(acc / static_cast<double>(a.size())) + shift;
}

}  // namespace annealvi
