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

#include <vector>

#include "annealvi/diffmath/gaussian.hpp"
#include "annealvi/diffmath/params.hpp"
#include "annealvi/models/point_eval.hpp"

namespace annealvi {

// Mean-field Gaussian q(z|x) = N(z; A x + b, diag(exp(C x + d))^2).
//
// The encoder maps one observation block of size in_dim to a latent block of
// size out_dim. An observation vector holding m blocks is encoded blockwise,
// which amortises the toy model's per-observation latents.
template <class T>
struct AffineEncoder {
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  Vec<T> mean_w;    // out_dim x in_dim, row-major
  Vec<T> mean_b;    // out_dim
  Vec<T> logstd_w;  // out_dim x in_dim, row-major
  Vec<T> logstd_b;  // out_dim

  static AffineEncoder standard_normal(std::size_t in_dim, std::size_t out_dim) {
    AffineEncoder e;
    e.in_dim = in_dim;
    e.out_dim = out_dim;
    e.mean_w.assign(in_dim * out_dim, 0.0);
    e.mean_b.assign(out_dim, 0.0);
    e.logstd_w.assign(in_dim * out_dim, 0.0);
    e.logstd_b.assign(out_dim, 0.0);
    return e;
  }

  void validate() const {
    require_same_size(mean_w.size(), in_dim * out_dim, "AffineEncoder mean_w");
    require_same_size(mean_b.size(), out_dim, "AffineEncoder mean_b");
    require_same_size(logstd_w.size(), in_dim * out_dim, "AffineEncoder logstd_w");
    require_same_size(logstd_b.size(), out_dim, "AffineEncoder logstd_b");
  }
};

// Parameters of q(.|x) for one observation vector.
template <class T>
struct Encoded {
  Vec<T> mean;
  Vec<T> log_std;
  Vec<T> std;
};

template <class T>
Encoded<T> encode(const AffineEncoder<T>& enc, const Vec<double>& x) {
  if (enc.in_dim == 0 || x.size() % enc.in_dim != 0) {
    throw std::invalid_argument("encode: observation size is not a multiple of in_dim");
  }
  const std::size_t blocks = x.size() / enc.in_dim;
  Encoded<T> q;
  q.mean.reserve(blocks * enc.out_dim);
  q.log_std.reserve(blocks * enc.out_dim);
  for (std::size_t m = 0; m < blocks; ++m) {
    const Vec<double> xm(x.begin() + m * enc.in_dim, x.begin() + (m + 1) * enc.in_dim);
    const Vec<T> mu = add(matvec(enc.mean_w, enc.out_dim, enc.in_dim, xm), enc.mean_b);
    const Vec<T> ls = add(matvec(enc.logstd_w, enc.out_dim, enc.in_dim, xm), enc.logstd_b);
    q.mean.insert(q.mean.end(), mu.begin(), mu.end());
    q.log_std.insert(q.log_std.end(), ls.begin(), ls.end());
  }
  q.std.resize(q.log_std.size());
  for (std::size_t i = 0; i < q.log_std.size(); ++i) q.std[i] = exp(q.log_std[i]);
  return q;
}

// z0 = mean + std * u0.
template <class T>
Vec<T> reparam_sample(const Encoded<T>& q, const Vec<double>& u0) {
  require_same_size(u0.size(), q.mean.size(), "reparam_sample noise");
  Vec<T> z(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) z[i] = q.mean[i] + q.std[i] * u0[i];
  return z;
}

template <class T>
PointEval<T> evaluate_q(const Encoded<T>& q, const Vec<T>& z, bool with_grad) {
  require_same_size(z.size(), q.mean.size(), "log_q latent");
  PointEval<T> out;
  T acc = 0.0;
  if (with_grad) out.grad.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const T r = (z[i] - q.mean[i]) / q.std[i];
    acc += -0.5 * kLogTwoPi - q.log_std[i] - 0.5 * square(r);
    if (with_grad) out.grad[i] = -r / q.std[i];
  }
  out.logp = acc;
  return out;
}

template <class T>
T log_q(const AffineEncoder<T>& enc, const Vec<double>& x, const Vec<T>& z) {
  return evaluate_q(encode(enc, x), z, false).logp;
}

inline void add_encoder_blocks(ParamSet& params, const AffineEncoder<double>& e,
                               bool trainable) {
  params.add("enc_mean_w", e.mean_w, trainable);
  params.add("enc_mean_b", e.mean_b, trainable);
  params.add("enc_logstd_w", e.logstd_w, trainable);
  params.add("enc_logstd_b", e.logstd_b, trainable);
}

template <class T>
AffineEncoder<T> bind_encoder(const AffineEncoder<double>& base, const BlockValues<T>& blocks) {
  AffineEncoder<T> e;
  e.in_dim = base.in_dim;
  e.out_dim = base.out_dim;
  auto pick = [&](const char* name, const Vec<double>& fallback) {
    const auto* b = blocks.find(name);
    return b ? *b : lift<T>(fallback);
  };
  e.mean_w = pick("enc_mean_w", base.mean_w);
  e.mean_b = pick("enc_mean_b", base.mean_b);
  e.logstd_w = pick("enc_logstd_w", base.logstd_w);
  e.logstd_b = pick("enc_logstd_b", base.logstd_b);
  e.validate();
  return e;
}

inline AffineEncoder<double> with_params(AffineEncoder<double> base, const ParamSet& params) {
  if (const auto* b = params.find("enc_mean_w")) base.mean_w = b->values;
  if (const auto* b = params.find("enc_mean_b")) base.mean_b = b->values;
  if (const auto* b = params.find("enc_logstd_w")) base.logstd_w = b->values;
  if (const auto* b = params.find("enc_logstd_b")) base.logstd_b = b->values;
  base.validate();
  return base;
}

}  // namespace annealvi
