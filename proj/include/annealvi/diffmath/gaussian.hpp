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

#include <numbers>
#include <stdexcept>

#include "annealvi/diffmath/vector_ops.hpp"

namespace annealvi {

inline constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

namespace detail {
template <class V>
void require_positive(const V& v) {
  if (!(value_of(v) > 0.0)) {
    throw std::domain_error("gaussian_logpdf: variance must be positive");
  }
}
}  // namespace detail

// Sum over i of log N(y_i; mean_i, var_i).
template <class Y, class M, class V>
auto gaussian_logpdf(const Vec<Y>& y, const Vec<M>& mean, const Vec<V>& var) {
  using R = Promote<Promote<Y, M>, V>;
  require_same_size(y.size(), mean.size(), "gaussian_logpdf mean");
  require_same_size(y.size(), var.size(), "gaussian_logpdf variance");
  R acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    detail::require_positive(var[i]);
    const R r = y[i] - mean[i];
    acc += -0.5 * (kLogTwoPi + log(var[i])) - square(r) / (2.0 * var[i]);
  }
  return acc;
}

// Isotropic variance overload: N(y; mean, var * Id).
template <class Y, class M, class V>
auto gaussian_logpdf(const Vec<Y>& y, const Vec<M>& mean, const V& var) {
  using R = Promote<Promote<Y, M>, V>;
  require_same_size(y.size(), mean.size(), "gaussian_logpdf mean");
  detail::require_positive(var);
  R quad = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) quad += square(y[i] - mean[i]);
  const double n = static_cast<double>(y.size());
  return R(-0.5 * n * (kLogTwoPi + log(var)) - quad / (2.0 * var));
}

}  // namespace annealvi
