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

#include "annealvi/diffmath/gaussian.hpp"
#include "annealvi/diffmath/params.hpp"
#include "annealvi/random.hpp"

namespace annealvi {
namespace {

TEST(GaussianLogpdf, StandardNormalAtMode) {
  EXPECT_NEAR(gaussian_logpdf(Vec<double>{0.0}, Vec<double>{0.0}, 1.0), -0.918938533204673, 1e-14);
}

TEST(GaussianLogpdf, AtMeanIsNormaliser) {
  const Vec<double> v{0.5, 2.0, 3.0};
  const Vec<double> y{1.0, -2.0, 0.3};
  double expected = 0.0;
  for (double vi : v) expected += -0.5 * std::log(2.0 * std::numbers::pi * vi);
  EXPECT_NEAR(gaussian_logpdf(y, y, v), expected, 1e-14);
}

TEST(GaussianLogpdf, HandEvaluation) {
  EXPECT_NEAR(gaussian_logpdf(Vec<double>{1.0}, Vec<double>{0.0}, 2.0),
              -0.5 * std::log(4.0 * std::numbers::pi) - 0.25, 1e-14);
  EXPECT_NEAR(gaussian_logpdf(Vec<double>{1.0}, Vec<double>{0.0}, Vec<double>{2.0}),
              -0.5 * std::log(4.0 * std::numbers::pi) - 0.25, 1e-14);
}

TEST(GaussianLogpdf, Errors) {
  EXPECT_THROW(gaussian_logpdf(Vec<double>{1.0}, Vec<double>{0.0, 1.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(gaussian_logpdf(Vec<double>{1.0}, Vec<double>{0.0}, 0.0), std::domain_error);
  EXPECT_THROW(gaussian_logpdf(Vec<double>{1.0}, Vec<double>{0.0}, Vec<double>{-1.0}),
               std::domain_error);
}

ParamSet scalar_params(std::vector<double> x) {
  ParamSet p;
  p.add("x", std::move(x));
  return p;
}

TEST(Differentiate, Square) {
  const auto d = differentiate([](const BlockValues<Var>& b) { return square(b["x"][0]); },
                               scalar_params({3.0}));
  EXPECT_DOUBLE_EQ(d.value, 9.0);
  EXPECT_DOUBLE_EQ(d.grads.at("x")[0], 6.0);
}

TEST(Differentiate, Constant) {
  const auto d = differentiate([](const BlockValues<Var>&) { return Var(4.0); },
                               scalar_params({3.0}));
  EXPECT_DOUBLE_EQ(d.value, 4.0);
  EXPECT_DOUBLE_EQ(d.grads.at("x")[0], 0.0);
}

TEST(Differentiate, ProductWithExp) {
  ParamSet p;
  p.add("x", {2.0});
  p.add("y", {0.0});
  const auto d = differentiate(
      [](const BlockValues<Var>& b) { return b["x"][0] * exp(b["y"][0]); }, p);
  EXPECT_DOUBLE_EQ(d.value, 2.0);
  EXPECT_DOUBLE_EQ(d.grads.at("x")[0], 1.0);
  EXPECT_DOUBLE_EQ(d.grads.at("y")[0], 2.0);
}

TEST(Differentiate, FrozenBlocksAreAbsent) {
  ParamSet p;
  p.add("x", {2.0});
  p.add("y", {1.0}, false);
  const auto d = differentiate(
      [](const BlockValues<Var>& b) { return b["x"][0] * b["y"][0]; }, p);
  EXPECT_TRUE(d.grads.contains("x"));
  EXPECT_FALSE(d.grads.contains("y"));
}

TEST(Differentiate, Deterministic) {
  const auto f = [](const BlockValues<Var>& b) {
    return softplus(b["x"][0]) * sigmoid(b["x"][1]) + tanh(b["x"][0] * b["x"][1]);
  };
  const auto a = differentiate(f, scalar_params({0.3, -1.2}));
  const auto b = differentiate(f, scalar_params({0.3, -1.2}));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.grads.flatten(), b.grads.flatten());
}

TEST(Differentiate, ManyOutputs) {
  const auto outs = differentiate_many(
      [](const BlockValues<Var>& b) {
        return std::vector<Var>{square(b["x"][0]), 3.0 * b["x"][0]};
      },
      scalar_params({2.0}));
  ASSERT_EQ(outs.size(), 2u);
  EXPECT_DOUBLE_EQ(outs[0].grads.at("x")[0], 4.0);
  EXPECT_DOUBLE_EQ(outs[1].grads.at("x")[0], 3.0);
}

TEST(Tape, MixingTapesThrows) {
  Tape t1, t2;
  const Var a = t1.variable(1.0);
  const Var b = t2.variable(2.0);
  EXPECT_THROW(a + b, std::invalid_argument);
}

TEST(FiniteDiff, Examples) {
  const auto sq = finite_diff_grad(
      [](const BlockValues<double>& b) { return square(b["x"][0]); }, scalar_params({3.0}));
  EXPECT_NEAR(sq.at("x")[0], 6.0, 1e-8);
  const auto c = finite_diff_grad([](const BlockValues<double>&) { return 1.5; },
                                  scalar_params({3.0, 2.0}));
  EXPECT_NEAR(c.at("x")[0], 0.0, 1e-12);
  EXPECT_NEAR(c.at("x")[1], 0.0, 1e-12);
  const auto s = finite_diff_grad(
      [](const BlockValues<double>& b) { return std::sin(b["x"][0]); }, scalar_params({0.0}));
  EXPECT_NEAR(s.at("x")[0], 1.0, 1e-9);
  EXPECT_THROW(finite_diff_grad([](const BlockValues<double>&) { return 0.0; },
                                scalar_params({0.0}), 0.0),
               std::invalid_argument);
}

// Every op in the engine against central differences on random inputs in [-2, 2].
TEST(Differentiate, MatchesFiniteDifferencesOnRandomInputs) {
  RandomStream rng(11, 0);
  const auto f = [](const auto& b) {
    const auto& x = b["x"];
    using std::exp, std::log, std::sqrt, std::tanh;
    auto y = x[0] * x[1] - x[2] / (2.5 + x[3]) + exp(0.5 * x[0]) + log(3.0 + x[1]) +
             sqrt(2.5 + x[2]) + tanh(x[3]) + square(x[1] - x[2]) + sigmoid(x[0]) +
             softplus(x[2]) + log1m_exp(-(1.0 + square(x[3]))) + min_zero(x[0] - 5.0);
    Vec<std::decay_t<decltype(y)>> v{x[0], x[1], x[2]};
    const auto cs = cumulative_sum(v);
    y += dot(v, cs) + gaussian_logpdf(v, Vec<double>{0.1, 0.2, 0.3}, 1.5 + square(x[3]));
    y += gaussian_logpdf(Vec<double>{0.3}, Vec<decltype(y)>{x[1]}, Vec<decltype(y)>{exp(x[0])});
    return y;
  };
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(4);
    for (double& v : x) v = 4.0 * rng.uniform() - 2.0;
    const ParamSet p = scalar_params(x);
    const auto ad = differentiate([&](const BlockValues<Var>& b) { return f(b); }, p);
    const auto fd = finite_diff_grad([&](const BlockValues<double>& b) { return f(b); }, p);
    EXPECT_LT(relative_error(ad.grads, fd), 1e-6) << "rep " << rep;
    EXPECT_NEAR(ad.value, f(values_of(p)), 1e-12 * std::max(1.0, std::abs(ad.value)));
  }
}

TEST(ParamSet, DuplicateAndLookup) {
  ParamSet p;
  p.add("a", {1.0});
  EXPECT_THROW(p.add("a", {2.0}), std::invalid_argument);
  EXPECT_THROW(p.at("b"), std::out_of_range);
  p.set_trainable("a", false);
  EXPECT_FALSE(p.at("a").trainable);
}

TEST(GradReport, AccumulateAndFlatten) {
  GradReport a;
  a.add_block("u", {1.0, 2.0});
  a.add_block("w", {3.0});
  GradReport b;
  b.accumulate(a, 2.0);
  EXPECT_EQ(b.flatten(), (std::vector<double>{2.0, 4.0, 6.0}));
  EXPECT_EQ(b.coordinate_names(), (std::vector<std::string>{"u[0]", "u[1]", "w[0]"}));
  b.scale_by(0.5);
  EXPECT_EQ(b.flatten(), a.flatten());
  EXPECT_DOUBLE_EQ(relative_error(a, b), 0.0);
}

TEST(RandomStream, ReproducibleAndIndependent) {
  RandomStream a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
  }
  RandomStream r(1, 0);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

}  // namespace
}  // namespace annealvi
