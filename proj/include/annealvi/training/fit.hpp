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
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "annealvi/errors.hpp"
#include "annealvi/gradients/grad_estimate.hpp"
#include "annealvi/kernels/stepsize.hpp"
#include "annealvi/training/config.hpp"
#include "annealvi/training/optimizer.hpp"

namespace annealvi {

struct HistoryRow {
  std::size_t epoch = 0;
  std::string objective;
  double elbo_mean = 0.0;
  double elbo_se = 0.0;
  double param_error = std::numeric_limits<double>::quiet_NaN();
  double acceptance_rate = 1.0;
  std::uint64_t kernel_version = 0;
};

template <template <class> class Model>
struct FitResult {
  Problem<Model, double> problem;
  StepSize step_size;
  std::vector<HistoryRow> history;
  double param_error = std::numeric_limits<double>::quiet_NaN();
};

// Independent 64-bit seed for (purpose, index) under a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  return RandomStream(seed, (purpose << 40) ^ index).next_u64();
}

// Indices of a uniform without-replacement minibatch (partial Fisher-Yates).
inline std::vector<std::size_t> sample_batch(std::size_t n, std::size_t size, RandomStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (size == 0 || size >= n) return idx;
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  return idx;
}

// Mean acceptance probability of value-only chains (shadow MALA rate for
// SIS, actual rate for AIS) over the given observations.
template <template <class> class Model>
double measure_acceptance(const Problem<Model, double>& problem, const EstimatorOptions& o,
                          const std::vector<Vec<double>>& data, std::size_t chains,
                          std::uint64_t seed) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const std::size_t latent = problem.model.latent_size(data[j].size());
    for (std::size_t c = 0; c < chains; ++c) {
      const ChainNoise noise = chain_noise(o, seed, j * chains + c, latent, problem.steps());
      sum += run_chain(o, problem, data[j], noise).mean_accept_prob();
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

// Per-coordinate spread of d/dz log p(x, z) at z ~ q(.|x), one sample per
// latent block.
template <template <class> class Model>
std::vector<Vec<double>> latent_grad_samples(const Problem<Model, double>& problem,
                                             const std::vector<Vec<double>>& data,
                                             std::size_t draws, std::uint64_t seed) {
  const std::size_t block = problem.eta.size();
  std::vector<Vec<double>> grads;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const Encoded<double> q = encode(problem.encoder, data[j]);
    for (std::size_t c = 0; c < draws; ++c) {
      RandomStream rng(seed, j * draws + c);
      const Vec<double> z = reparam_sample(q, rng.normal_vector(q.mean.size()));
      const Vec<double> g = problem.model.evaluate(data[j], z, true).grad;
      for (std::size_t s = 0; s + block <= g.size(); s += block) {
        grads.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(s),
                           g.begin() + static_cast<std::ptrdiff_t>(s + block));
      }
    }
  }
  return grads;
}

inline std::size_t adaptation_draws(std::size_t data_size, std::size_t chains) {
  return std::max<std::size_t>(chains, (2 + data_size - 1) / data_size);
}

// Sets eta to the fixed point eta0 / (epsilon + std) of the update below.
template <template <class> class Model>
void initialize_stepsize(Problem<Model, double>& problem, StepSize& step,
                         const std::vector<Vec<double>>& data, std::size_t chains,
                         std::uint64_t seed) {
  const auto grads =
      latent_grad_samples(problem, data, adaptation_draws(data.size(), chains), seed);
  const Vec<double> sd = coordinate_std(grads);
  step.eta.resize(sd.size());
  for (std::size_t i = 0; i < sd.size(); ++i) step.eta[i] = step.eta0 / (step.epsilon + sd[i]);
  problem.eta = step.eta;
  ++step.version;
}

// One adaptation round: eta0 is moved towards the target acceptance rate
// (eta is rescaled by the same factor), then eta is updated from the spread
// of d/dz log p(x, z) at z ~ q(.|x). Returns the acceptance rate measured
// before the update.
template <template <class> class Model>
double adaptation_round(Problem<Model, double>& problem, StepSize& step,
                        const EstimatorOptions& o, const std::vector<Vec<double>>& data,
                        double target_rate, double gain, std::size_t chains,
                        std::uint64_t seed) {
  if (data.empty()) throw std::invalid_argument("adaptation_round: no data");
  const double rate = measure_acceptance(problem, o, data, chains, derive_seed(seed, 1, 0));
  const double eta0 = adapt_eta0(step.eta0, rate, target_rate, gain);
  for (double& e : step.eta) e *= eta0 / step.eta0;
  step.eta0 = eta0;

  const auto grads = latent_grad_samples(problem, data, adaptation_draws(data.size(), chains),
                                         derive_seed(seed, 2, 0));
  step.eta = adapt_stepsize(step.eta, grads, step.eta0, step.epsilon);
  problem.eta = step.eta;
  ++step.version;
  return rate;
}

namespace detail {

template <template <class> class Model>
FitResult<Model> fit(Problem<Model, double> problem, const std::vector<Vec<double>>& data,
                     const TrainConfig& config, bool train_model,
                     const Model<double>* truth) {
  config.validate();
  if (data.empty()) throw std::invalid_argument("fit: no data");
  problem.schedule = make_schedule(config.schedule, config.annealed() ? config.steps : 1);

  BlockSelection sel;
  sel.model = train_model;
  sel.encoder = true;
  sel.eta = config.annealed() && config.train_eta;
  sel.schedule = config.annealed() && config.schedule != ScheduleKind::kFixed;
  ParamSet params = make_params(problem, sel);

  StepSize step;
  step.eta = problem.eta;
  step.eta0 = config.eta0;
  step.epsilon = config.epsilon;
  const EstimatorOptions est = config.estimator();
  const double target = config.target_rate();

  FitResult<Model> result;
  if (config.annealed()) {
    initialize_stepsize(problem, step, data, config.chains, derive_seed(config.seed, 7, 0));
    for (std::size_t w = 0; w < config.warmup_steps; ++w) {
      adaptation_round(problem, step, est, data, target, config.eta0_gain, config.chains,
                       derive_seed(config.seed, 3, w));
    }
    params.at("eta").values = problem.eta;
  }

  OptimizerState opt;
  opt.learning_rate = config.learning_rate;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    RandomStream batch_rng(derive_seed(config.seed, 4, epoch), 0);
    const auto batch = sample_batch(data.size(), config.batch_size, batch_rng);

    GradOptions go;
    go.estimator = est;
    go.n = config.chains;
    go.seed = derive_seed(config.seed, 5, epoch);
    go.use_cv = config.use_cv && config.chains >= 2;

    const std::uint64_t version = step.version;
    GradReport total;
    std::vector<double> objective;
    double accept = 0.0;
    for (std::size_t b : batch) {
      go.stream_offset = b * config.chains;
      const GradEstimate g = estimate_gradient(problem, params, data[b], go);
      total.accumulate(g.grads, 1.0 / static_cast<double>(batch.size()));
      objective.push_back(g.objective);
      accept += g.accept_rate;
    }
    if (step.version != version) throw std::logic_error("fit: kernel changed during a gradient batch");

    const auto [mean, var] = mean_variance(objective);
    if (!std::isfinite(mean)) {
      throw NonFiniteObjective("fit: non-finite " + to_string(config.objective) +
                               " objective at epoch " + std::to_string(epoch));
    }
    optimizer_step(opt, params, total);
    problem = with_params(problem, params);

    HistoryRow row;
    row.epoch = epoch;
    row.objective = to_string(config.objective);
    row.elbo_mean = mean;
    row.elbo_se = std::sqrt(var / static_cast<double>(objective.size()));
    row.acceptance_rate = config.annealed() ? accept / static_cast<double>(batch.size()) : 1.0;
    row.kernel_version = version;
    if (truth) row.param_error = squared_param_error(problem.model, *truth);
    result.history.push_back(row);

    if (config.annealed() && config.adapt_every > 0 && epoch % config.adapt_every == 0 &&
        epoch < config.epochs) {
      std::vector<Vec<double>> adapt_data;
      for (std::size_t b : batch) adapt_data.push_back(data[b]);
      adaptation_round(problem, step, est, adapt_data, target, config.eta0_gain, config.chains,
                       derive_seed(config.seed, 6, epoch));
      params.at("eta").values = problem.eta;
    }
  }
  result.problem = problem;
  result.step_size = step;
  if (truth) result.param_error = squared_param_error(problem.model, *truth);
  return result;
}

}  // namespace detail

// Variational inference with the model frozen: fits the encoder (and the
// schedule when learnable); eta and eta0 follow the adaptation rounds.
template <template <class> class Model>
FitResult<Model> fit_vi(const Problem<Model, double>& problem,
                        const std::vector<Vec<double>>& data, const TrainConfig& config) {
  return detail::fit(problem, data, config, false, static_cast<const Model<double>*>(nullptr));
}

// Joint ascent on model and encoder parameters. `truth` supplies the
// data-generating parameters for the per-epoch squared error.
template <template <class> class Model>
FitResult<Model> fit_model(const Problem<Model, double>& problem,
                           const std::vector<Vec<double>>& data, const TrainConfig& config,
                           const Model<double>& truth) {
  return detail::fit(problem, data, config, true, &truth);
}

}  // namespace annealvi
