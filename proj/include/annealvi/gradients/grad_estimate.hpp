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

#include <cstdint>
#include <vector>

#include "annealvi/diffmath/params.hpp"
#include "annealvi/estimators/batch.hpp"
#include "annealvi/gradients/control_variate.hpp"

namespace annealvi {

// Gradient of a Monte Carlo ELBO averaged over n chains, split into
//   pathwise = n^-1 sum_i grad W_i                      (a, u held fixed)
//   score    = n^-1 sum_i (W_i - b_i) grad log A_i      (AIS only)
// with b_i the leave-one-out baseline when use_cv and 0 otherwise.
// cv_correction = n^-1 sum_i b_i grad log A_i is the quantity subtracted by
// the control variate, so score + cv_correction is the plain REINFORCE term.
// The *_variance reports hold per-coordinate sample variances of the
// per-chain summands.
struct GradEstimate {
  GradReport grads;
  std::size_t n = 0;
  bool use_cv = false;
  double objective = 0.0;  // mean W over chains
  double accept_rate = 1.0;
  GradReport pathwise;
  GradReport score;
  GradReport cv_correction;
  GradReport pathwise_variance;
  GradReport score_variance;
  GradReport cv_variance;
};

struct GradOptions {
  EstimatorOptions estimator;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_offset = 0;  // chain i draws from stream stream_offset + i
  bool use_cv = false;
};

namespace detail {

inline GradReport mean_of(const std::vector<GradReport>& r) {
  GradReport out;
  for (const auto& g : r) out.accumulate(g);
  out.scale_by(1.0 / static_cast<double>(r.size()));
  return out;
}

inline GradReport variance_of(const std::vector<GradReport>& r, const GradReport& mean) {
  GradReport out = mean;
  out.scale_by(0.0);
  if (r.size() < 2) return out;
  for (const auto& g : r) {
    GradReport d = g;
    d.accumulate(mean, -1.0);
    for (auto& e : d.entries())
      for (double& v : e.values) v *= v;
    out.accumulate(d);
  }
  out.scale_by(1.0 / static_cast<double>(r.size() - 1));
  return out;
}

inline GradReport scaled(GradReport g, double s) {
  g.scale_by(s);
  return g;
}

}  // namespace detail

// Generic gradient estimator for every estimator kind. Trainable blocks of
// `params` are differentiated; the rest of the problem comes from `base`.
template <template <class> class Model>
GradEstimate estimate_gradient(const Problem<Model, double>& base, const ParamSet& params,
                               const Vec<double>& x, const GradOptions& o) {
  if (o.n == 0) throw std::invalid_argument("estimate_gradient: n must be at least 1");
  const bool ais = o.estimator.kind == EstimatorKind::kAis;
  if (ais && o.use_cv && o.n < 2) {
    throw std::invalid_argument("estimate_gradient: control variate needs n >= 2");
  }
  const Problem<Model, double> values = with_params(base, params);
  const std::size_t latent = values.model.latent_size(x.size());

  std::vector<double> w(o.n), accept(o.n);
  std::vector<GradReport> grad_w(o.n), grad_a(o.n);
  for (std::size_t i = 0; i < o.n; ++i) {
    const ChainNoise noise =
        chain_noise(o.estimator, o.seed, o.stream_offset + i, latent, values.steps());
    const auto out = differentiate_many(
        [&](const BlockValues<Var>& blocks) {
          const auto problem = bind_problem<Model, Var>(base, blocks);
          const Trajectory<Var> t = run_chain(o.estimator, problem, x, noise);
          accept[i] = t.mean_accept_prob();
          return ais ? std::vector<Var>{t.log_w, t.log_a} : std::vector<Var>{t.log_w};
        },
        params);
    w[i] = out[0].value;
    grad_w[i] = out[0].grads;
    if (ais) grad_a[i] = out[1].grads;
  }

  GradEstimate est;
  est.n = o.n;
  est.use_cv = ais && o.use_cv;
  est.pathwise = detail::mean_of(grad_w);
  est.pathwise_variance = detail::variance_of(grad_w, est.pathwise);
  est.objective = mean_variance(w).first;
  est.accept_rate = mean_variance(accept).first;
  est.grads = est.pathwise;
  if (ais) {
    const std::vector<double> baseline =
        est.use_cv ? leave_one_out_baselines(w) : std::vector<double>(o.n, 0.0);
    std::vector<GradReport> score(o.n), cv(o.n);
    for (std::size_t i = 0; i < o.n; ++i) {
      score[i] = detail::scaled(grad_a[i], w[i] - baseline[i]);
      cv[i] = detail::scaled(grad_a[i], baseline[i]);
    }
    est.score = detail::mean_of(score);
    est.score_variance = detail::variance_of(score, est.score);
    est.cv_correction = detail::mean_of(cv);
    est.cv_variance = detail::variance_of(cv, est.cv_correction);
    est.grads.accumulate(est.score);
  } else {
    est.score = detail::scaled(est.pathwise, 0.0);
    est.score_variance = est.score;
    est.cv_correction = est.score;
    est.cv_variance = est.score;
  }
  return est;
}

// Pathwise gradient of the SIS objective averaged over n chains.
template <template <class> class Model>
GradEstimate grad_sis(const Problem<Model, double>& base, const ParamSet& params,
                      const Vec<double>& x, std::size_t n, std::uint64_t seed) {
  GradOptions o;
  o.estimator.kind = EstimatorKind::kSis;
  o.n = n;
  o.seed = seed;
  return estimate_gradient(base, params, x, o);
}

// Pathwise gradient of one IWAE bound with n importance samples.
template <template <class> class Model>
GradEstimate grad_iwae(const Problem<Model, double>& base, const ParamSet& params,
                       const Vec<double>& x, std::size_t n, std::uint64_t seed) {
  GradOptions o;
  o.estimator.kind = EstimatorKind::kIwae;
  o.estimator.iwae_samples = n;
  o.n = 1;
  o.seed = seed;
  return estimate_gradient(base, params, x, o);
}

// Pathwise plus REINFORCE gradient of the AIS objective over n chains.
template <template <class> class Model>
GradEstimate grad_ais(const Problem<Model, double>& base, const ParamSet& params,
                      const Vec<double>& x, std::size_t n, std::uint64_t seed, bool use_cv,
                      AisKernel kernel = AisKernel::kMala) {
  GradOptions o;
  o.estimator.kind = EstimatorKind::kAis;
  o.estimator.kernel = kernel;
  o.n = n;
  o.seed = seed;
  o.use_cv = use_cv;
  return estimate_gradient(base, params, x, o);
}

// grad of sum_k log alpha^{a_k}_{k,u_k}(z_{k-1}) with (u, a) frozen: the
// chain is replayed from `noise` with the recorded accept bits forced.
template <template <class> class Model>
GradReport score_log_accept(const Problem<Model, double>& base, const ParamSet& params,
                            const Vec<double>& x, const ChainNoise& noise,
                            const std::vector<std::uint8_t>& accepted,
                            AisKernel kernel = AisKernel::kMala) {
  return differentiate(
             [&](const BlockValues<Var>& blocks) {
               const auto problem = bind_problem<Model, Var>(base, blocks);
               return ais_estimate(problem, x, noise, AisOptions{kernel, &accepted}).log_a;
             },
             params)
      .grads;
}

// log W of an AIS chain replayed with frozen accept bits, as a function of
// parameter values; the finite-difference counterpart of the pathwise term.
template <template <class> class Model>
double replay_ais_log_w(const Problem<Model, double>& base, const BlockValues<double>& blocks,
                        const Vec<double>& x, const ChainNoise& noise,
                        const std::vector<std::uint8_t>& accepted,
                        AisKernel kernel = AisKernel::kMala) {
  const auto problem = bind_problem<Model, double>(base, blocks);
  return ais_estimate(problem, x, noise, AisOptions{kernel, &accepted}).log_w;
}

}  // namespace annealvi
