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
#include <stdexcept>

#include "annealvi/kernels/langevin.hpp"
#include "annealvi/models/point_eval.hpp"

namespace annealvi {

// One Metropolis-Hastings transition written as a proposal map plus an
// accept/reject bit: z_next = accepted ? proposal : z.
template <class T>
struct KernelStep {
  Vec<T> z_next;
  Vec<T> proposal;
  bool accepted = false;
  T log_accept_prob = 0.0;  // log alpha_u(z)
  T log_alpha = 0.0;        // log of alpha_u(z) if accepted, 1 - alpha_u(z) otherwise
};

// log of the probability of the observed accept/reject outcome.
template <class T>
T log_outcome_prob(const T& log_accept_prob, bool accepted) {
  if (accepted) return log_accept_prob;
  if (!(value_of(log_accept_prob) < 0.0)) {
    throw std::invalid_argument("rejection recorded for a move accepted with probability 1");
  }
  return log1m_exp(log_accept_prob);
}

// MALA acceptance log-probability for the move from -> to, where both
// points carry the target log-density and its gradient:
//   min(0, log pi(to) + log m(to, from) - log pi(from) - log m(from, to))
// with m the ULA density of variance 2 eta.
template <class T>
T mala_log_accept(const Vec<T>& from, const PointEval<T>& at_from, const Vec<T>& to,
                  const PointEval<T>& at_to, const Vec<T>& eta) {
  const T forward = ula_logdensity(from, at_from.grad, to, eta);
  const T backward = ula_logdensity(to, at_to.grad, from, eta);
  return min_zero(at_to.logp + backward - at_from.logp - forward);
}

// Full MALA transition for a target given as a callable z -> PointEval<T>.
// The move is accepted iff v < alpha.
template <class T, class Target>
KernelStep<T> mala_step(const Target& target, const Vec<T>& z, const Vec<double>& u, double v,
                        const Vec<T>& eta) {
  if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("mala_step: v must lie in [0, 1)");
  const PointEval<T> at_z = target(z);
  KernelStep<T> step;
  step.proposal = langevin_map(z, at_z.grad, eta, u);
  const PointEval<T> at_y = target(step.proposal);
  step.log_accept_prob = mala_log_accept(z, at_z, step.proposal, at_y, eta);
  step.accepted = v < std::exp(value_of(step.log_accept_prob));
  step.log_alpha = log_outcome_prob(step.log_accept_prob, step.accepted);
  step.z_next = step.accepted ? step.proposal : z;
  return step;
}

// Random-walk proposal z + scale * u (scale is the diagonal of Sigma^{1/2}).
template <class T>
Vec<T> rwm_propose(const Vec<T>& z, const Vec<double>& u, const Vec<T>& scale) {
  require_same_size(z.size(), u.size(), "rwm_propose noise");
  require_same_size(z.size(), scale.size(), "rwm_propose scale");
  Vec<T> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(value_of(scale[i]) > 0.0)) throw std::domain_error("rwm_propose: scale must be positive");
    out[i] = z[i] + scale[i] * u[i];
  }
  return out;
}

// min(0, log pi(proposal) - log pi(z)).
template <class T>
T rwm_log_accept(const T& log_target_z, const T& log_target_proposal) {
  return min_zero(log_target_proposal - log_target_z);
}

template <class T, class Target>
KernelStep<T> rwm_step(const Target& target, const Vec<T>& z, const Vec<double>& u, double v,
                       const Vec<T>& scale) {
  if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("rwm_step: v must lie in [0, 1)");
  KernelStep<T> step;
  step.proposal = rwm_propose(z, u, scale);
  step.log_accept_prob = rwm_log_accept(target(z).logp, target(step.proposal).logp);
  step.accepted = v < std::exp(value_of(step.log_accept_prob));
  step.log_alpha = log_outcome_prob(step.log_accept_prob, step.accepted);
  step.z_next = step.accepted ? step.proposal : z;
  return step;
}

}  // namespace annealvi
