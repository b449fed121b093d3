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

#include "annealvi/annealing/problem.hpp"

namespace annealvi {

// log q and log p (and their z-gradients) at one latent point. Every bridge
// density log gamma_k = (1 - beta_k) log q + beta_k log p is a combination of
// these, so a point is evaluated once and reused across k.
template <class T>
struct BridgePoint {
  Vec<T> z;
  PointEval<T> q;
  PointEval<T> p;

  T log_gamma(const T& beta) const { return (1.0 - beta) * q.logp + beta * p.logp; }

  Vec<T> grad_log_gamma(const T& beta) const {
    Vec<T> g(z.size());
    const T one_minus = 1.0 - beta;
    for (std::size_t i = 0; i < z.size(); ++i) g[i] = one_minus * q.grad[i] + beta * p.grad[i];
    return g;
  }

  // log p(x, z) - log q(z | x)
  T log_ratio() const { return p.logp - q.logp; }
};

// The bridge family gamma_0 = q(.|x), ..., gamma_K = p(x, .) for one
// observation vector.
template <template <class> class Model, class T>
class Bridge {
 public:
  Bridge(const Problem<Model, T>& problem, const Vec<double>& x)
      : problem_(problem), x_(x), q_(encode(problem.encoder, x)) {
    latent_size_ = problem.model.latent_size(x.size());
    require_same_size(q_.mean.size(), latent_size_, "Bridge encoder output");
    eta_.resize(latent_size_);
    const std::size_t d = problem.eta.size();
    for (std::size_t i = 0; i < latent_size_; ++i) eta_[i] = problem.eta[i % d];
  }

  BridgePoint<T> at(Vec<T> z, bool with_grad = true) const {
    BridgePoint<T> pt;
    pt.q = evaluate_q(q_, z, with_grad);
    pt.p = problem_.model.evaluate(x_, z, with_grad);
    pt.z = std::move(z);
    return pt;
  }

  const T& beta(std::size_t k) const { return problem_.schedule.beta(k); }
  std::size_t steps() const { return problem_.schedule.steps(); }
  std::size_t latent_size() const { return latent_size_; }
  const Encoded<T>& encoded() const { return q_; }
  // Step sizes tiled to the full latent vector.
  const Vec<T>& eta() const { return eta_; }
  const Vec<double>& x() const { return x_; }
  const Problem<Model, T>& problem() const { return problem_; }

  T log_gamma(std::size_t k, const Vec<T>& z) const { return at(z, false).log_gamma(beta(k)); }
  Vec<T> grad_log_gamma(std::size_t k, const Vec<T>& z) const {
    return at(z, true).grad_log_gamma(beta(k));
  }

 private:
  const Problem<Model, T>& problem_;
  const Vec<double>& x_;
  Encoded<T> q_;
  std::size_t latent_size_ = 0;
  Vec<T> eta_;
};

// (1 - beta_k) log q(z|x) + beta_k log p(x, z).
template <template <class> class Model, class T>
T log_gamma(const Problem<Model, T>& problem, const Vec<double>& x, std::size_t k,
            const Vec<T>& z) {
  return Bridge<Model, T>(problem, x).log_gamma(k, z);
}

template <template <class> class Model, class T>
Vec<T> grad_log_gamma(const Problem<Model, T>& problem, const Vec<double>& x, std::size_t k,
                      const Vec<T>& z) {
  return Bridge<Model, T>(problem, x).grad_log_gamma(k, z);
}

}  // namespace annealvi
