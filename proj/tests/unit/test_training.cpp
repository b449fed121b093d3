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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "annealvi/models/ppca_exact.hpp"
#include "annealvi/training/fit.hpp"

namespace annealvi {
namespace {

TEST(Optimizer, ZeroGradientLeavesParameters) {
  ParamSet p;
  p.add("a", {1.0, -2.0});
  OptimizerState s;
  GradReport g;
  g.add_block("a", {0.0, 0.0});
  optimizer_step(s, p, g);
  EXPECT_EQ(p.at("a").values, (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(s.step, 1u);
}

TEST(Optimizer, FirstStepAndConstantGradient) {
  ParamSet p;
  p.add("a", {0.0});
  OptimizerState s;
  s.learning_rate = 0.01;
  GradReport g;
  g.add_block("a", {0.3});
  optimizer_step(s, p, g);
  EXPECT_NEAR(p.at("a").values[0], 0.01 * 0.3 / (0.3 + 1e-8), 1e-15);
  double before = p.at("a").values[0];
  for (int i = 0; i < 2000; ++i) {
    before = p.at("a").values[0];
    optimizer_step(s, p, g);
  }
  EXPECT_NEAR(p.at("a").values[0] - before, 0.01, 1e-9);
}

TEST(Optimizer, ShapeMismatchAndFrozenBlocks) {
  ParamSet p;
  p.add("a", {0.0, 1.0});
  p.add("b", {0.0}, false);
  OptimizerState s;
  GradReport bad;
  bad.add_block("a", {1.0});
  EXPECT_THROW(optimizer_step(s, p, bad), std::invalid_argument);
  GradReport frozen;
  frozen.add_block("b", {1.0});
  EXPECT_THROW(optimizer_step(s, p, frozen), std::invalid_argument);
  GradReport unknown;
  unknown.add_block("c", {1.0});
  EXPECT_THROW(optimizer_step(s, p, unknown), std::invalid_argument);
  EXPECT_EQ(s.step, 0u);
}

TEST(Optimizer, InvariantToBlockOrder) {
  ParamSet p1, p2;
  p1.add("a", {0.5});
  p1.add("b", {-1.0, 2.0});
  p2.add("b", {-1.0, 2.0});
  p2.add("a", {0.5});
  OptimizerState s1, s2;
  for (int i = 0; i < 5; ++i) {
    GradReport g1, g2;
    g1.add_block("a", {0.1 * i});
    g1.add_block("b", {-0.2, 0.3 * i});
    g2.add_block("b", {-0.2, 0.3 * i});
    g2.add_block("a", {0.1 * i});
    optimizer_step(s1, p1, g1);
    optimizer_step(s2, p2, g2);
  }
  EXPECT_EQ(p1.at("a").values, p2.at("a").values);
  EXPECT_EQ(p1.at("b").values, p2.at("b").values);
}

TEST(SampleBatch, WithoutReplacement) {
  RandomStream rng(1, 0);
  const auto idx = sample_batch(50, 20, rng);
  EXPECT_EQ(idx.size(), 20u);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 20u);
  for (auto i : idx) EXPECT_LT(i, 50u);
  EXPECT_EQ(sample_batch(5, 0, rng).size(), 5u);
}

struct ConjugateData {
  PpcaModel<double> model;
  std::vector<Vec<double>> data;
  double mean_evidence = 0.0;
};

ConjugateData conjugate_data() {
  RandomStream rng(2, 0);
  ConjugateData c{orthogonal_ppca(4, 2, 0.8, rng), {}, 0.0};
  c.data = generate_data(c.model, 20, rng);
  for (const auto& x : c.data) c.mean_evidence += exact_log_evidence(c.model, x);
  c.mean_evidence /= static_cast<double>(c.data.size());
  return c;
}

Problem<PpcaModel, double> initial_problem(const PpcaModel<double>& m) {
  return {m, AffineEncoder<double>::standard_normal(m.obs_dim, m.latent_dim), make_fixed(1),
          Vec<double>(m.latent_dim, 0.1)};
}

double final_mean(const std::vector<HistoryRow>& h, std::size_t last) {
  double s = 0.0;
  for (std::size_t i = h.size() - last; i < h.size(); ++i) s += h[i].elbo_mean;
  return s / static_cast<double>(last);
}

TEST(FitVi, VaeReachesEvidenceOnConjugateFixture) {
  const auto c = conjugate_data();
  TrainConfig cfg;
  cfg.objective = EstimatorKind::kVae;
  cfg.epochs = 1000;
  cfg.learning_rate = 0.03;
  cfg.seed = 1;
  const auto coarse = fit_vi(initial_problem(c.model), c.data, cfg);
  cfg.epochs = 500;
  cfg.learning_rate = 0.003;
  const auto r = fit_vi(coarse.problem, c.data, cfg);
  ASSERT_EQ(r.history.size(), 500u);
  EXPECT_NEAR(final_mean(r.history, 50), c.mean_evidence, 0.05);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_EQ(r.history[i].epoch, i + 1);
}

TEST(FitVi, SisNotWorseThanVaeAndHistoryAscends) {
  const auto c = conjugate_data();
  TrainConfig cfg;
  cfg.epochs = 150;
  cfg.learning_rate = 0.03;
  cfg.seed = 2;
  cfg.objective = EstimatorKind::kVae;
  const auto vae = fit_vi(initial_problem(c.model), c.data, cfg);
  cfg.objective = EstimatorKind::kSis;
  cfg.steps = 5;
  const auto sis = fit_vi(initial_problem(c.model), c.data, cfg);
  const auto& last = sis.history.back();
  EXPECT_GE(final_mean(sis.history, 10), final_mean(vae.history, 10) - 3.0 * last.elbo_se);
  for (std::size_t i = 1; i < sis.history.size(); ++i) {
    const auto& a = sis.history[i - 1];
    const auto& b = sis.history[i];
    EXPECT_GE(b.elbo_mean, a.elbo_mean - 2.0 * std::max(a.elbo_se, b.elbo_se)) << "epoch " << b.epoch;
  }
}

TEST(FitVi, SeedForSeedReproducible) {
  const auto c = conjugate_data();
  TrainConfig cfg;
  cfg.objective = EstimatorKind::kAis;
  cfg.chains = 2;
  cfg.steps = 3;
  cfg.epochs = 5;
  cfg.warmup_steps = 3;
  cfg.seed = 9;
  const auto a = fit_vi(initial_problem(c.model), c.data, cfg);
  const auto b = fit_vi(initial_problem(c.model), c.data, cfg);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].elbo_mean, b.history[i].elbo_mean);
    EXPECT_EQ(a.history[i].acceptance_rate, b.history[i].acceptance_rate);
  }
  EXPECT_EQ(a.problem.encoder.mean_w, b.problem.encoder.mean_w);
  EXPECT_EQ(a.problem.eta, b.problem.eta);
}

TEST(FitVi, KernelsFrozenWithinGradientBatches) {
  const auto c = conjugate_data();
  TrainConfig cfg;
  cfg.objective = EstimatorKind::kSis;
  cfg.epochs = 4;
  cfg.warmup_steps = 5;
  const auto r = fit_vi(initial_problem(c.model), c.data, cfg);
  // One initialisation plus five warm-up rounds, then one round between epochs.
  for (std::size_t i = 0; i < r.history.size(); ++i) EXPECT_EQ(r.history[i].kernel_version, 6u + i);
  EXPECT_EQ(r.step_size.version, 6u + 3u);
}

TEST(FitModel, ZeroLearningRateKeepsParameters) {
  const auto c = conjugate_data();
  auto start = initial_problem(c.model);
  start.model.theta0[0] += 0.5;
  TrainConfig cfg;
  cfg.objective = EstimatorKind::kSis;
  cfg.epochs = 1;
  cfg.learning_rate = 0.0;
  const auto r = fit_model(start, c.data, cfg, c.model);
  EXPECT_EQ(r.problem.model.theta0, start.model.theta0);
  EXPECT_EQ(r.problem.model.theta1, start.model.theta1);
  EXPECT_NEAR(r.param_error, 0.25, 1e-15);
}

TEST(FitModel, DegenerateToyRecoversLikelihoodMean) {
  ToyModel<double> truth;
  truth.xi = 0.0;
  truth.zeta = 0.0;
  truth.sigma = 0.5;
  RandomStream rng(3, 0);
  const auto data = generate_data(truth, 200, rng);
  double xbar = 0.0;
  for (const auto& x : data) xbar += x[0];
  xbar /= static_cast<double>(data.size());
  ToyModel<double> init = truth;
  init.xi = 0.5;
  init.zeta = 0.5;
  Problem<ToyModel, double> p{init, AffineEncoder<double>::standard_normal(1, 2), make_fixed(1),
                              {0.1, 0.1}};
  TrainConfig cfg;
  cfg.objective = EstimatorKind::kVae;
  cfg.epochs = 300;
  cfg.learning_rate = 0.02;
  const auto r = fit_model(p, data, cfg, truth);
  const double fitted_mean = r.problem.model.xi * (2.0 + r.problem.model.zeta);
  EXPECT_NEAR(fitted_mean, xbar, 0.1);
}

TEST(Fit, NonFiniteObjectiveAborts) {
  const auto c = conjugate_data();
  std::vector<Vec<double>> bad = c.data;
  bad[0] = {1e300, 0.0, 0.0, 0.0};
  TrainConfig cfg;
  cfg.objective = EstimatorKind::kVae;
  cfg.epochs = 2;
  EXPECT_THROW(fit_vi(initial_problem(c.model), bad, cfg), NonFiniteObjective);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.epochs = 1;
  cfg.rho = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.rho = 0.0;
  cfg.objective = EstimatorKind::kAis;
  EXPECT_DOUBLE_EQ(cfg.target_rate(), 0.8);
  cfg.objective = EstimatorKind::kSis;
  EXPECT_DOUBLE_EQ(cfg.target_rate(), 0.9);
}

TEST(Adaptation, ReachesTargetRate) {
  RandomStream rng(4, 0);
  const auto m = random_ppca(4, 2, 0.8, rng);
  const auto data = generate_data(m, 16, rng);
  Problem<PpcaModel, double> p{m, meanfield_encoder(m), make_fixed(3), {0.1, 0.1}};
  StepSize step;
  step.eta = p.eta;
  EstimatorOptions o;
  o.kind = EstimatorKind::kAis;
  for (int r = 0; r < 60; ++r) adaptation_round(p, step, o, data, 0.8, 1.0, 4, 100 + r);
  EXPECT_NEAR(measure_acceptance(p, o, data, 64, 7), 0.8, 0.05);
  EXPECT_EQ(step.version, 60u);
}

}  // namespace
}  // namespace annealvi
