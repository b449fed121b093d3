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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "annealvi/estimators/ais.hpp"
#include "annealvi/estimators/elbo.hpp"
#include "annealvi/estimators/sis.hpp"

namespace annealvi {

enum class EstimatorKind { kVae, kIwae, kSis, kAis };

inline std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::kVae: return "vae";
    case EstimatorKind::kIwae: return "iwae";
    case EstimatorKind::kSis: return "sis";
    case EstimatorKind::kAis: return "ais";
  }
  return "unknown";
}

inline EstimatorKind parse_estimator_kind(std::string_view s) {
  if (s == "vae") return EstimatorKind::kVae;
  if (s == "iwae") return EstimatorKind::kIwae;
  if (s == "sis") return EstimatorKind::kSis;
  if (s == "ais") return EstimatorKind::kAis;
  throw std::invalid_argument("unknown estimator '" + std::string(s) + "'");
}

struct EstimatorOptions {
  EstimatorKind kind = EstimatorKind::kAis;
  std::size_t iwae_samples = 1;
  AisKernel kernel = AisKernel::kMala;
  bool keep_trajectories = false;
};

// Per-chain summary row of an EstimateBatch.
struct TrajectoryRecord {
  std::uint64_t stream = 0;
  double log_w = 0.0;
  double log_a = 0.0;
  std::size_t accept_count = 0;
  double accept_rate = 1.0;  // mean acceptance probability (shadow for SIS)
};

struct EstimateBatch {
  std::vector<TrajectoryRecord> rows;
  std::vector<Trajectory<double>> trajectories;  // filled when requested
  double mean = 0.0;
  double variance = 0.0;  // sample variance of logW (n - 1 denominator; 0 for n = 1)
  double log_mean_exp = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  std::size_t n() const { return rows.size(); }
  double mean_accept_rate() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.accept_rate;
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
  }
};

// Number of standard-normal vectors drawn before the K steps.
inline std::size_t initial_draws(const EstimatorOptions& o) {
  if (o.kind == EstimatorKind::kIwae) {
    if (o.iwae_samples == 0) throw std::invalid_argument("iwae: need at least one sample");
    return o.iwae_samples;
  }
  return 1;
}

// Draws the noise of chain `stream` under `seed` for the given estimator.
// VAE and IWAE draw no transition noise.
inline ChainNoise chain_noise(const EstimatorOptions& o, std::uint64_t seed, std::uint64_t stream,
                              std::size_t latent, std::size_t steps) {
  RandomStream rng(seed, stream);
  const bool annealed = o.kind == EstimatorKind::kSis || o.kind == EstimatorKind::kAis;
  return draw_chain_noise(rng, latent, annealed ? steps : 0, o.kind == EstimatorKind::kAis,
                          initial_draws(o));
}

// One chain of the requested estimator, in scalar type T.
template <template <class> class Model, class T>
Trajectory<T> run_chain(const EstimatorOptions& o, const Problem<Model, T>& problem,
                        const Vec<double>& x, const ChainNoise& noise) {
  switch (o.kind) {
    case EstimatorKind::kVae: {
      Trajectory<T> t;
      t.log_w = elbo_vae(problem, x, noise.u0.front());
      return t;
    }
    case EstimatorKind::kIwae: {
      Trajectory<T> t;
      t.log_w = iwae(problem, x, noise.u0);
      return t;
    }
    case EstimatorKind::kSis:
      return sis_estimate(problem, x, noise);
    case EstimatorKind::kAis:
      return ais_estimate(problem, x, noise, AisOptions{o.kernel, nullptr});
  }
  throw std::logic_error("run_chain: unreachable");
}

// Mean and (n - 1) sample variance, accumulated in index order.
inline std::pair<double, double> mean_variance(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_variance: empty input");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  if (v.size() > 1) {
    for (double x : v) var += square(x - mean);
    var /= static_cast<double>(v.size() - 1);
  }
  return {mean, var};
}

// n independent chains; chain i uses RandomStream(seed, i). Reductions run in
// chain order, so the result is bit-reproducible.
template <template <class> class Model>
EstimateBatch estimate_batch(const EstimatorOptions& o, const Problem<Model, double>& problem,
                             const Vec<double>& x, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("estimate_batch: n must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t latent = problem.model.latent_size(x.size());
  EstimateBatch batch;
  batch.seed = seed;
  batch.rows.reserve(n);
  std::vector<double> log_w;
  log_w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ChainNoise noise = chain_noise(o, seed, i, latent, problem.steps());
    Trajectory<double> t = run_chain(o, problem, x, noise);
    TrajectoryRecord r;
    r.stream = i;
    r.log_w = t.log_w;
    r.log_a = t.log_a;
    r.accept_count = t.accept_count();
    r.accept_rate = t.mean_accept_prob();
    batch.rows.push_back(r);
    log_w.push_back(t.log_w);
    if (o.keep_trajectories) batch.trajectories.push_back(std::move(t));
  }
  std::tie(batch.mean, batch.variance) = mean_variance(log_w);
  batch.log_mean_exp = annealvi::log_mean_exp(log_w);
  batch.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

}  // namespace annealvi
