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
#include <numbers>

#include <gtest/gtest.h>

#include "annealvi/kernels/langevin.hpp"
#include "annealvi/kernels/metropolis.hpp"
#include "annealvi/kernels/stepsize.hpp"
#include "annealvi/random.hpp"

namespace annealvi {
namespace {

// log N(z; 0, 1) per coordinate.
PointEval<double> std_normal(const Vec<double>& z) {
  PointEval<double> e;
  e.logp = gaussian_logpdf(z, Vec<double>(z.size(), 0.0), 1.0);
  for (double v : z) e.grad.push_back(-v);
  return e;
}

TEST(LangevinMap, Examples) {
  const Vec<double> z{1.0};
  EXPECT_DOUBLE_EQ(langevin_map(z, Vec<double>{-1.0}, Vec<double>{0.5}, {0.0})[0], 0.5);
  const Vec<double> tiny = langevin_map(z, Vec<double>{-1.0}, Vec<double>{1e-14}, {0.3});
  EXPECT_NEAR(tiny[0], 1.0, 1e-6);
  const Vec<double> a = langevin_map(z, Vec<double>{-1.0}, Vec<double>{0.5}, {0.7});
  const Vec<double> b = langevin_map(z, Vec<double>{-1.0}, Vec<double>{0.5}, {-0.7});
  EXPECT_NEAR(0.5 * (a[0] + b[0]), 0.5, 1e-15);
}

TEST(UlaDensity, Examples) {
  const Vec<double> eta{0.3, 0.7};
  const Vec<double> z{0.5, -1.0};
  const Vec<double> g{0.2, 0.4};
  const Vec<double> mean = langevin_drift(z, g, eta);
  const double at_mean = ula_logdensity(z, g, mean, eta);
  EXPECT_NEAR(at_mean,
              -0.5 * (std::log(4.0 * std::numbers::pi * 0.3) + std::log(4.0 * std::numbers::pi * 0.7)),
              1e-14);
  EXPECT_NEAR(ula_logdensity(Vec<double>{0.0}, Vec<double>{0.0}, Vec<double>{0.0}, Vec<double>{0.5}),
              -0.918938533204673, 1e-14);
  EXPECT_GT(at_mean, ula_logdensity(z, g, Vec<double>{mean[0] + 0.01, mean[1]}, eta));
  EXPECT_THROW(ula_logdensity(z, g, mean, Vec<double>{0.0, 1.0}), std::domain_error);
}

TEST(UlaDensity, IntegratesToOne) {
  const double eta = 0.2, z = 0.4, g = -0.4;
  const int n = 20000;
  const double lo = -6.0, hi = 6.0, h = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * std::exp(ula_logdensity(Vec<double>{z}, Vec<double>{g}, Vec<double>{lo + i * h},
                                     Vec<double>{eta}));
  }
  EXPECT_NEAR(s * h, 1.0, 1e-6);
}

TEST(MalaAccept, IdentityProposal) {
  // u chosen so the proposal equals z.
  const Vec<double> z{0.8};
  const Vec<double> eta{0.25};
  const Vec<double> u{-eta[0] * -z[0] / std::sqrt(2.0 * eta[0])};
  const auto target = [](const Vec<double>& y) { return std_normal(y); };
  const auto step = mala_step(target, z, u, 0.99, eta);
  EXPECT_NEAR(step.proposal[0], z[0], 1e-15);
  EXPECT_NEAR(step.log_accept_prob, 0.0, 1e-14);
  EXPECT_TRUE(step.accepted);
}

TEST(MalaAccept, HandEvaluation) {
  // Standard normal, eta = 0.25, z = 0, u = 1: T = sqrt(0.5).
  const double t = std::sqrt(0.5);
  const double log_pi_t = -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * t * t;
  const double log_pi_z = -0.5 * std::log(2.0 * std::numbers::pi);
  const double var = 0.5;
  const double log_m_zt = -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * t * t / var;
  const double back_mean = t - 0.25 * t;
  const double log_m_tz = -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * back_mean * back_mean / var;
  const double expected = std::min(0.0, log_pi_t + log_m_tz - log_pi_z - log_m_zt);
  const auto target = [](const Vec<double>& y) { return std_normal(y); };
  const auto step = mala_step(target, Vec<double>{0.0}, {1.0}, 0.0, Vec<double>{0.25});
  EXPECT_NEAR(step.proposal[0], t, 1e-15);
  EXPECT_NEAR(step.log_accept_prob, expected, 1e-14);
  EXPECT_TRUE(step.accepted);  // v = 0 always accepts

  const double alpha = std::exp(expected);
  ASSERT_LT(alpha, 1.0);
  const auto rej = mala_step(target, Vec<double>{0.0}, {1.0}, 0.5 * (alpha + 1.0), Vec<double>{0.25});
  EXPECT_FALSE(rej.accepted);
  EXPECT_EQ(rej.z_next, (Vec<double>{0.0}));
  EXPECT_NEAR(rej.log_alpha, std::log1p(-alpha), 1e-14);
}

TEST(MalaAccept, DetailedBalance) {
  RandomStream rng(4, 0);
  const Vec<double> eta{0.3, 0.15};
  // Correlated Gaussian target with precision [[2, 0.5], [0.5, 1]].
  const auto target = [](const Vec<double>& z) {
    PointEval<double> e;
    e.logp = -0.5 * (2.0 * z[0] * z[0] + z[0] * z[1] + z[1] * z[1]);
    e.grad = {-(2.0 * z[0] + 0.5 * z[1]), -(0.5 * z[0] + z[1])};
    return e;
  };
  for (int rep = 0; rep < 200; ++rep) {
    const Vec<double> z = rng.normal_vector(2);
    const Vec<double> t = rng.normal_vector(2);
    const auto ez = target(z);
    const auto et = target(t);
    const double a_zt = mala_log_accept(z, ez, t, et, eta);
    const double a_tz = mala_log_accept(t, et, z, ez, eta);
    EXPECT_LE(a_zt, 0.0);
    const double lhs = ez.logp + ula_logdensity(z, ez.grad, t, eta) + a_zt;
    const double rhs = et.logp + ula_logdensity(t, et.grad, z, eta) + a_tz;
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(MalaStep, Errors) {
  const auto target = [](const Vec<double>& y) { return std_normal(y); };
  EXPECT_THROW(mala_step(target, Vec<double>{0.0}, {1.0}, 1.0, Vec<double>{0.1}), std::invalid_argument);
  EXPECT_THROW(log_outcome_prob(0.0, false), std::invalid_argument);
}

TEST(Rwm, Examples) {
  const auto target = [](const Vec<double>& y) { return std_normal(y); };
  const auto stay = rwm_step(target, Vec<double>{0.3}, {0.0}, 0.9, Vec<double>{0.5});
  EXPECT_EQ(stay.proposal, (Vec<double>{0.3}));
  EXPECT_DOUBLE_EQ(stay.log_accept_prob, 0.0);
  const auto uphill = rwm_step(target, Vec<double>{2.0}, {-2.0}, 0.9, Vec<double>{0.5});
  EXPECT_DOUBLE_EQ(uphill.log_accept_prob, 0.0);
  const auto down = rwm_step(target, Vec<double>{0.0}, {1.0}, 0.9, Vec<double>{1.0});
  EXPECT_NEAR(down.log_accept_prob, -0.5, 1e-15);
  EXPECT_FALSE(down.accepted);  // 0.9 > exp(-0.5)
}

TEST(Inversion, RoundTripAndDivergence) {
  RandomStream rng(5, 0);
  const auto grad = [](const Vec<double>& z) {
    Vec<double> g(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) g[i] = -2.0 * z[i];
    return g;
  };
  for (int rep = 0; rep < 50; ++rep) {
    const Vec<double> z = rng.normal_vector(3);
    const Vec<double> u = rng.normal_vector(3);
    const Vec<double> eta(3, 0.45 * rng.uniform());
    const Vec<double> y = langevin_map(z, grad(z), eta, u);
    const Vec<double> back = invert_langevin_map(y, u, eta, grad);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], z[i], 1e-10);
  }
  const Vec<double> y{0.7};
  EXPECT_EQ(invert_langevin_map(y, {0.4}, Vec<double>{0.0}, grad), y);
  const Vec<double> mode{0.0};
  EXPECT_EQ(invert_langevin_map(mode, {0.0}, Vec<double>{0.3}, grad), mode);
  EXPECT_THROW(invert_langevin_map(Vec<double>{1.0}, {0.2}, Vec<double>{1.0}, grad), DivergenceError);
}

TEST(StepSize, AdaptExamples) {
  const std::vector<Vec<double>> constant{{1.0}, {1.0}, {1.0}};
  EXPECT_NEAR(adapt_stepsize({0.5}, constant, 0.2, 0.1)[0], 0.9 * 0.5 + 0.1 * 0.2 / 0.1, 1e-15);
  const double s = 0.9;
  // Two samples with sample std 0.9.
  const std::vector<Vec<double>> spread{{0.0}, {s * std::sqrt(2.0)}};
  EXPECT_NEAR(adapt_stepsize({1.0}, spread, 1.0, 0.1)[0], 1.0, 1e-12);
  Vec<double> eta{3.0};
  for (int i = 0; i < 400; ++i) eta = adapt_stepsize(eta, spread, 1.0, 0.1);
  EXPECT_NEAR(eta[0], 1.0 / (0.1 + s), 1e-12);
  EXPECT_THROW(adapt_stepsize({1.0}, {{1.0}}, 1.0, 0.1), std::invalid_argument);
}

TEST(StepSize, Eta0Examples) {
  EXPECT_DOUBLE_EQ(adapt_eta0(0.3, 0.8, 0.8, 0.1), 0.3);
  EXPECT_NEAR(adapt_eta0(0.3, 1.0, 0.8, 0.1), 0.3 * std::exp(0.02), 1e-15);
  EXPECT_THROW(adapt_eta0(0.3, 1.5, 0.8, 0.1), std::invalid_argument);
}

TEST(StepSize, ControllerReachesTargetOnOneDimensionalGaussian) {
  RandomStream rng(6, 0);
  double eta0 = 5.0;
  const auto target = [](const Vec<double>& y) { return std_normal(y); };
  double rate = 0.0;
  Vec<double> z{0.0};
  for (int round = 0; round < 200; ++round) {
    double acc = 0.0;
    const int moves = 200;
    for (int i = 0; i < moves; ++i) {
      const auto step = mala_step(target, z, rng.normal_vector(1), rng.uniform(), Vec<double>{eta0});
      acc += std::exp(step.log_accept_prob);
      z = step.z_next;
    }
    rate = acc / moves;
    eta0 = adapt_eta0(eta0, rate, 0.8, 1.0);
  }
  EXPECT_NEAR(rate, 0.8, 0.05);
}

}  // namespace
}  // namespace annealvi
