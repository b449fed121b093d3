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

// Hierarchical ring model. For each observation i:
//   z_i ~ N(0, Id_d),  x_i | z_i ~ N(xi * (|z_i|^2 + zeta), sigma^2).
// An observation vector of length N pairs with a latent vector of length d*N.
template <class T>
struct ToyModel {
  using scalar_type = T;

  std::size_t latent_dim = 2;  // per observation
  double sigma = 0.1;
  T xi = 1.0;
  T zeta = 0.0;

  std::size_t latent_size(std::size_t x_size) const { return latent_dim * x_size; }

  void validate() const {
    if (latent_dim == 0) throw std::invalid_argument("ToyModel: latent_dim must be >= 1");
    if (!(sigma > 0.0)) throw std::domain_error("ToyModel: sigma must be positive");
  }

  PointEval<T> evaluate(const Vec<double>& x, const Vec<T>& z, bool with_grad) const {
    require_same_size(z.size(), latent_dim * x.size(), "ToyModel latent");
    const double var = sigma * sigma;
    const std::size_t d = latent_dim;
    PointEval<T> out;
    out.logp = gaussian_logpdf(z, Vec<double>(z.size(), 0.0), 1.0);
    if (with_grad) out.grad.resize(z.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      T norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) norm2 += square(z[i * d + j]);
      const T mean = xi * (norm2 + zeta);
      const T r = x[i] - mean;
      out.logp += -0.5 * (kLogTwoPi + std::log(var)) - square(r) / (2.0 * var);
      if (with_grad) {
        // d/dz_ij = -z_ij + (r / sigma^2) * xi * 2 z_ij
        const T coef = 2.0 * xi * r / var;
        for (std::size_t j = 0; j < d; ++j) {
          out.grad[i * d + j] = (coef - 1.0) * z[i * d + j];
        }
      }
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

// The toy parameters live in one block "theta" = (xi, zeta).
inline void add_model_blocks(ParamSet& params, const ToyModel<double>& m, bool trainable) {
  params.add("theta", {m.xi, m.zeta}, trainable);
}

template <class T>
ToyModel<T> bind_model(const ToyModel<double>& base, const BlockValues<T>& blocks) {
  ToyModel<T> m;
  m.latent_dim = base.latent_dim;
  m.sigma = base.sigma;
  if (const auto* t = blocks.find("theta")) {
    require_same_size(t->size(), 2, "ToyModel theta block");
    m.xi = (*t)[0];
    m.zeta = (*t)[1];
  } else {
    m.xi = base.xi;
    m.zeta = base.zeta;
  }
  m.validate();
  return m;
}

inline ToyModel<double> with_params(ToyModel<double> base, const ParamSet& params) {
  if (const auto* b = params.find("theta")) {
    base.xi = b->values.at(0);
    base.zeta = b->values.at(1);
  }
  return base;
}

inline double squared_param_error(const ToyModel<double>& a, const ToyModel<double>& b) {
  return square(a.xi - b.xi) + square(a.zeta - b.zeta);
}

// Returns one length-1 observation per datapoint.
inline std::vector<Vec<double>> generate_data(const ToyModel<double>& m, std::size_t n,
                                              RandomStream& rng,
                                              std::vector<Vec<double>>* latents = nullptr) {
  m.validate();
  std::vector<Vec<double>> data;
  data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec<double> z = rng.normal_vector(m.latent_dim);
    double norm2 = 0.0;
    for (double v : z) norm2 += v * v;
    data.push_back({m.xi * (norm2 + m.zeta) + m.sigma * rng.normal()});
    if (latents) latents->push_back(z);
  }
  return data;
}

}  // namespace annealvi
