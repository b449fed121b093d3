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

#include <stdexcept>
#include <vector>

#include "annealvi/diffmath/gaussian.hpp"
#include "annealvi/diffmath/params.hpp"
#include "annealvi/models/point_eval.hpp"
#include "annealvi/random.hpp"

namespace annealvi {

// Probabilistic PCA: z ~ N(0, Id_d), x | z ~ N(theta0 + theta1 z, sigma^2 Id_p).
// theta1 is stored row-major, p rows by d columns.
template <class T>
struct PpcaModel {
  using scalar_type = T;

  std::size_t obs_dim = 1;
  std::size_t latent_dim = 1;
  double sigma = 1.0;
  Vec<T> theta0;
  Vec<T> theta1;

  std::size_t latent_size(std::size_t x_size) const {
    require_same_size(x_size, obs_dim, "PpcaModel observation");
    return latent_dim;
  }

  void validate() const {
    require_same_size(theta0.size(), obs_dim, "PpcaModel theta0");
    require_same_size(theta1.size(), obs_dim * latent_dim, "PpcaModel theta1");
    if (!(sigma > 0.0)) throw std::domain_error("PpcaModel: sigma must be positive");
  }

  PointEval<T> evaluate(const Vec<double>& x, const Vec<T>& z, bool with_grad) const {
    require_same_size(x.size(), obs_dim, "PpcaModel observation");
    require_same_size(z.size(), latent_dim, "PpcaModel latent");
    const double var = sigma * sigma;
    const Vec<T> mean = add(theta0, matvec(theta1, obs_dim, latent_dim, z));
    PointEval<T> out;
    out.logp = gaussian_logpdf(z, Vec<double>(latent_dim, 0.0), 1.0) +
               gaussian_logpdf(x, mean, var);
    if (with_grad) {
      // -z + theta1^T (x - mean) / sigma^2
      Vec<T> resid(obs_dim);
      for (std::size_t i = 0; i < obs_dim; ++i) resid[i] = (x[i] - mean[i]) / var;
      const Vec<T> back = matvec_transposed(theta1, obs_dim, latent_dim, resid);
      out.grad.resize(latent_dim);
      for (std::size_t j = 0; j < latent_dim; ++j) out.grad[j] = back[j] - z[j];
    }
    return out;
  }

  T log_joint(const Vec<double>& x, const Vec<T>& z) const {
    return evaluate(x, z, false).logp;
  }
  Vec<T> grad_z_log_joint(const Vec<double>& x, const Vec<T>& z) const {
    return evaluate(x, z, true).grad;
  }
};

inline void add_model_blocks(ParamSet& params, const PpcaModel<double>& m,
                             bool trainable) {
  params.add("theta0", m.theta0, trainable);
  params.add("theta1", m.theta1, trainable);
}

template <class T>
PpcaModel<T> bind_model(const PpcaModel<double>& base, const BlockValues<T>& blocks) {
  PpcaModel<T> m;
  m.obs_dim = base.obs_dim;
  m.latent_dim = base.latent_dim;
  m.sigma = base.sigma;
  const auto* t0 = blocks.find("theta0");
  const auto* t1 = blocks.find("theta1");
  m.theta0 = t0 ? *t0 : lift<T>(base.theta0);
  m.theta1 = t1 ? *t1 : lift<T>(base.theta1);
  m.validate();
  return m;
}

inline PpcaModel<double> with_params(PpcaModel<double> base, const ParamSet& params) {
  if (const auto* b = params.find("theta0")) base.theta0 = b->values;
  if (const auto* b = params.find("theta1")) base.theta1 = b->values;
  base.validate();
  return base;
}

inline double squared_param_error(const PpcaModel<double>& a, const PpcaModel<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.theta0.size(); ++i) e += square(a.theta0[i] - b.theta0[i]);
  for (std::size_t i = 0; i < a.theta1.size(); ++i) e += square(a.theta1[i] - b.theta1[i]);
  return e;
}

// Draws (x, z) pairs from the generative process.
inline std::vector<Vec<double>> generate_data(const PpcaModel<double>& m, std::size_t n,
                                              RandomStream& rng,
                                              std::vector<Vec<double>>* latents = nullptr) {
  m.validate();
  std::vector<Vec<double>> data;
  data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec<double> z = rng.normal_vector(m.latent_dim);
    Vec<double> x = add(m.theta0, matvec(m.theta1, m.obs_dim, m.latent_dim, z));
    for (double& xi : x) xi += m.sigma * rng.normal();
    data.push_back(std::move(x));
    if (latents) latents->push_back(z);
  }
  return data;
}

// A pPCA model with i.i.d. N(0, scale^2) loadings and offsets.
inline PpcaModel<double> random_ppca(std::size_t obs_dim, std::size_t latent_dim,
                                     double sigma, RandomStream& rng,
                                     double loading_scale = 1.0) {
  PpcaModel<double> m;
  m.obs_dim = obs_dim;
  m.latent_dim = latent_dim;
  m.sigma = sigma;
  m.theta0 = rng.normal_vector(obs_dim);
  m.theta1 = rng.normal_vector(obs_dim * latent_dim);
  for (double& v : m.theta1) v *= loading_scale;
  return m;
}

}  // namespace annealvi
