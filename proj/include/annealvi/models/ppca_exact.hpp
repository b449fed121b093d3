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

// Closed-form quantities for the conjugate pPCA model. These are the
// reference values every Monte Carlo estimator is checked against.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "annealvi/models/encoder.hpp"
#include "annealvi/models/ppca.hpp"

namespace annealvi {

namespace detail {
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::MatrixXd loading(const PpcaModel<double>& m) {
  return Eigen::Map<const RowMatrix>(m.theta1.data(), m.obs_dim, m.latent_dim);
}
inline Eigen::VectorXd to_eigen(const Vec<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}
inline Vec<double> to_vec(const Eigen::VectorXd& v) { return Vec<double>(v.data(), v.data() + v.size()); }

inline Eigen::MatrixXd marginal_covariance(const PpcaModel<double>& m) {
  const Eigen::MatrixXd w = loading(m);
  Eigen::MatrixXd c = w * w.transpose();
  c.diagonal().array() += m.sigma * m.sigma;
  return c;
}

inline Eigen::MatrixXd posterior_precision(const PpcaModel<double>& m) {
  const Eigen::MatrixXd w = loading(m);
  Eigen::MatrixXd prec = w.transpose() * w / (m.sigma * m.sigma);
  prec.diagonal().array() += 1.0;
  return prec;
}
}  // namespace detail

// log N(x; theta0, theta1 theta1^T + sigma^2 Id).
inline double exact_log_evidence(const PpcaModel<double>& m, const Vec<double>& x) {
  m.validate();
  require_same_size(x.size(), m.obs_dim, "exact_log_evidence observation");
  const Eigen::LLT<Eigen::MatrixXd> llt(detail::marginal_covariance(m));
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("exact_log_evidence: marginal covariance is singular");
  }
  const Eigen::VectorXd r = detail::to_eigen(x) - detail::to_eigen(m.theta0);
  const Eigen::VectorXd w = llt.matrixL().solve(r);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(m.obs_dim) * kLogTwoPi + logdet + w.squaredNorm());
}

// Gradient of exact_log_evidence w.r.t. theta0 and theta1 (blocks named as
// in add_model_blocks): C^{-1} r and (a a^T - C^{-1}) theta1 with a = C^{-1} r.
inline GradReport exact_grad_log_evidence(const PpcaModel<double>& m, const Vec<double>& x) {
  m.validate();
  const Eigen::MatrixXd cinv = detail::marginal_covariance(m).inverse();
  const Eigen::VectorXd a = cinv * (detail::to_eigen(x) - detail::to_eigen(m.theta0));
  const detail::RowMatrix g1 = (a * a.transpose() - cinv) * detail::loading(m);
  GradReport g;
  g.add_block("theta0", detail::to_vec(a));
  g.add_block("theta1", Vec<double>(g1.data(), g1.data() + g1.size()));
  return g;
}

struct GaussianPosterior {
  Vec<double> mean;
  Eigen::MatrixXd covariance;
};

// Sigma = (Id + theta1^T theta1 / sigma^2)^{-1}, mu = Sigma theta1^T (x - theta0) / sigma^2.
inline GaussianPosterior exact_posterior(const PpcaModel<double>& m, const Vec<double>& x) {
  m.validate();
  require_same_size(x.size(), m.obs_dim, "exact_posterior observation");
  const Eigen::MatrixXd cov = detail::posterior_precision(m).inverse();
  const Eigen::VectorXd mu = cov * detail::loading(m).transpose() *
                             (detail::to_eigen(x) - detail::to_eigen(m.theta0)) /
                             (m.sigma * m.sigma);
  return {detail::to_vec(mu), cov};
}

inline double gaussian_logpdf_full(const Vec<double>& z, const GaussianPosterior& g) {
  const Eigen::LLT<Eigen::MatrixXd> llt(g.covariance);
  if (llt.info() != Eigen::Success) throw std::domain_error("covariance not positive definite");
  const Eigen::VectorXd w = llt.matrixL().solve(detail::to_eigen(z) - detail::to_eigen(g.mean));
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(z.size()) * kLogTwoPi + logdet + w.squaredNorm());
}

inline double posterior_logpdf(const PpcaModel<double>& m, const Vec<double>& x,
                               const Vec<double>& z) {
  return gaussian_logpdf_full(z, exact_posterior(m, x));
}

namespace detail {
// Affine encoder with the exact posterior mean map and per-coordinate
// variances `var`.
inline AffineEncoder<double> posterior_mean_encoder(const PpcaModel<double>& m,
                                                    const Eigen::VectorXd& var) {
  const Eigen::MatrixXd cov = posterior_precision(m).inverse();
  const RowMatrix a = cov * loading(m).transpose() / (m.sigma * m.sigma);
  const Eigen::VectorXd b = -a * to_eigen(m.theta0);
  auto e = AffineEncoder<double>::standard_normal(m.obs_dim, m.latent_dim);
  e.mean_w.assign(a.data(), a.data() + a.size());
  e.mean_b = to_vec(b);
  for (std::size_t j = 0; j < m.latent_dim; ++j) e.logstd_b[j] = 0.5 * std::log(var(j));
  return e;
}
}  // namespace detail

// Encoder equal to the exact posterior for every x. Only representable by a
// mean-field family when theta1 has orthogonal columns.
inline AffineEncoder<double> conjugate_encoder(const PpcaModel<double>& m, double tol = 1e-10) {
  m.validate();
  const Eigen::MatrixXd prec = detail::posterior_precision(m);
  const Eigen::MatrixXd off = prec - Eigen::MatrixXd(prec.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > tol * prec.diagonal().cwiseAbs().maxCoeff()) {
    throw std::domain_error("conjugate_encoder: posterior covariance is not diagonal");
  }
  return detail::posterior_mean_encoder(m, prec.inverse().diagonal());
}

// KL(q || posterior)-optimal mean-field encoder: exact posterior mean,
// variances 1 / diag(posterior precision).
inline AffineEncoder<double> meanfield_encoder(const PpcaModel<double>& m) {
  m.validate();
  return detail::posterior_mean_encoder(m, detail::posterior_precision(m).diagonal().cwiseInverse());
}

// Multiplies every std of q by `factor`.
inline AffineEncoder<double> inflate_std(AffineEncoder<double> e, double factor) {
  for (double& b : e.logstd_b) b += std::log(factor);
  return e;
}

// pPCA model whose loading matrix has orthogonal columns with norms in
// [0.5, 2), so the exact posterior is mean-field.
inline PpcaModel<double> orthogonal_ppca(std::size_t obs_dim, std::size_t latent_dim,
                                         double sigma, RandomStream& rng) {
  if (latent_dim > obs_dim) throw std::invalid_argument("orthogonal_ppca: latent_dim > obs_dim");
  Eigen::MatrixXd g(obs_dim, latent_dim);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(obs_dim, latent_dim);
  detail::RowMatrix w(obs_dim, latent_dim);
  for (Eigen::Index j = 0; j < w.cols(); ++j) w.col(j) = q.col(j) * (0.5 + 1.5 * rng.uniform());
  PpcaModel<double> m;
  m.obs_dim = obs_dim;
  m.latent_dim = latent_dim;
  m.sigma = sigma;
  m.theta0 = rng.normal_vector(obs_dim);
  m.theta1.assign(w.data(), w.data() + w.size());
  return m;
}

}  // namespace annealvi
