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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "annealvi/diffmath/params.hpp"

namespace annealvi {

// Adaptive-moment optimizer state. Moments are keyed by block name, so the
// update does not depend on the order in which blocks were registered.
struct OptimizerState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double floor = 1e-8;
  std::uint64_t step = 0;
  std::map<std::string, std::vector<double>> first_moment;
  std::map<std::string, std::vector<double>> second_moment;
};

// One ascent step: theta += lr * m_hat / (sqrt(v_hat) + floor) for every
// block in `grads`. Every gradient block must name a trainable block of
// matching size.
inline void optimizer_step(OptimizerState& state, ParamSet& params, const GradReport& grads) {
  for (const auto& e : grads.entries()) {
    const ParameterBlock* b = params.find(e.name);
    if (!b) throw std::invalid_argument("optimizer_step: unknown block '" + e.name + "'");
    if (!b->trainable) throw std::invalid_argument("optimizer_step: block '" + e.name + "' is frozen");
    if (b->values.size() != e.values.size()) {
      throw std::invalid_argument("optimizer_step: size mismatch for block '" + e.name + "'");
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (const auto& e : grads.entries()) {
    auto& values = params.at(e.name).values;
    auto& m = state.first_moment[e.name];
    auto& v = state.second_moment[e.name];
    m.resize(values.size(), 0.0);
    v.resize(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = e.values[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      values[i] += state.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + state.floor);
    }
  }
}

}  // namespace annealvi
