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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "annealvi/diffmath/vector_ops.hpp"

namespace annealvi {

// Per-coordinate step sizes plus the scalar controller state. `version`
// increases on every mutation so callers can verify that a kernel stayed
// frozen over a stretch of work.
struct StepSize {
  Vec<double> eta;
  double eta0 = 0.1;
  double epsilon = 1e-2;
  std::uint64_t version = 0;
};

// Per-coordinate sample standard deviation (n - 1 denominator).
inline Vec<double> coordinate_std(const std::vector<Vec<double>>& samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("coordinate_std: need at least two samples");
  }
  const std::size_t d = samples.front().size();
  Vec<double> mean(d, 0.0), var(d, 0.0);
  for (const auto& s : samples) {
    require_same_size(s.size(), d, "coordinate_std sample");
    for (std::size_t i = 0; i < d; ++i) mean[i] += s[i];
  }
  for (double& m : mean) m /= static_cast<double>(samples.size());
  for (const auto& s : samples)
    for (std::size_t i = 0; i < d; ++i) var[i] += square(s[i] - mean[i]);
  for (double& v : var) v = std::sqrt(v / static_cast<double>(samples.size() - 1));
  return var;
}

// eta_i <- 0.9 eta_i + 0.1 eta0 / (epsilon + std_i), where std_i is taken
// over a batch of gradients d/dz_i log p(x, z).
inline Vec<double> adapt_stepsize(const Vec<double>& eta,
                                  const std::vector<Vec<double>>& grad_samples, double eta0,
                                  double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("adapt_stepsize: epsilon must be positive");
  const Vec<double> sd = coordinate_std(grad_samples);
  require_same_size(sd.size(), eta.size(), "adapt_stepsize");
  Vec<double> out(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) out[i] = 0.9 * eta[i] + 0.1 * eta0 / (epsilon + sd[i]);
  return out;
}

// eta0 <- eta0 * exp(gain * (observed - target)).
inline double adapt_eta0(double eta0, double observed_rate, double target_rate, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("adapt_eta0: gain must be positive");
  if (observed_rate < 0.0 || observed_rate > 1.0 || target_rate < 0.0 || target_rate > 1.0) {
    throw std::invalid_argument("adapt_eta0: rates must lie in [0, 1]");
  }
  return eta0 * std::exp(gain * (observed_rate - target_rate));
}

}  // namespace annealvi
