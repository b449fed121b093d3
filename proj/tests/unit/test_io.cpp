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
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "annealvi/io/serialize.hpp"
#include "annealvi/models/ppca_exact.hpp"

namespace annealvi {
namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

TEST(Serialize, PpcaRoundTrip) {
  RandomStream rng(1, 0);
  const auto m = random_ppca(5, 2, 0.7, rng);
  const auto back = ppca_from_json(json::parse(to_json(m).dump()));
  EXPECT_EQ(back.sigma, m.sigma);
  EXPECT_EQ(back.theta0, m.theta0);
  EXPECT_EQ(back.theta1, m.theta1);
  EXPECT_EQ(back.obs_dim, m.obs_dim);
  EXPECT_EQ(back.latent_dim, m.latent_dim);
  EXPECT_EQ(to_json(m).at("theta1").size(), 5u);
}

TEST(Serialize, ToyAndEncoderRoundTrip) {
  ToyModel<double> t;
  t.xi = 1.25;
  t.zeta = -0.5;
  t.sigma = 0.1;
  const auto tb = toy_from_json(json::parse(to_json(t).dump()));
  EXPECT_EQ(tb.xi, t.xi);
  EXPECT_EQ(tb.zeta, t.zeta);
  EXPECT_EQ(tb.sigma, t.sigma);
  RandomStream rng(2, 0);
  const auto e = meanfield_encoder(random_ppca(4, 2, 0.5, rng));
  const auto eb = encoder_from_json(json::parse(to_json(e).dump()));
  EXPECT_EQ(eb.mean_w, e.mean_w);
  EXPECT_EQ(eb.mean_b, e.mean_b);
  EXPECT_EQ(eb.logstd_w, e.logstd_w);
  EXPECT_EQ(eb.logstd_b, e.logstd_b);
}

TEST(Serialize, WrongTypeRejected) {
  ToyModel<double> t;
  EXPECT_THROW(ppca_from_json(to_json(t)), std::invalid_argument);
}

TEST(Serialize, EstimateCsvColumnsAndPrecision) {
  RandomStream rng(3, 0);
  const auto m = random_ppca(4, 2, 0.8, rng);
  const auto x = generate_data(m, 1, rng).front();
  Problem<PpcaModel, double> p{m, meanfield_encoder(m), make_fixed(2), {0.05, 0.05}};
  EstimatorOptions o;
  o.kind = EstimatorKind::kAis;
  const auto b = estimate_batch(o, p, x, 4, 11);
  std::ostringstream os;
  write_csv(os, b);
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "seed,stream,logW,logA,accept_count,accept_rate");
  for (std::size_t i = 0; i < 4; ++i) {
    std::istringstream row(ls[i + 1]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[0], "11");
    EXPECT_EQ(std::stod(cells[2]), b.rows[i].log_w);
  }
  const auto s = summary_json(b);
  EXPECT_EQ(s.at("n").get<std::size_t>(), 4u);
  EXPECT_DOUBLE_EQ(s.at("mean").get<double>(), b.mean);
}

TEST(Serialize, HistoryCsv) {
  std::vector<HistoryRow> rows(2);
  rows[0].epoch = 1;
  rows[0].objective = "sis";
  rows[0].elbo_mean = -3.5;
  rows[1].epoch = 2;
  rows[1].objective = "sis";
  rows[1].param_error = 0.25;
  std::ostringstream os;
  write_history_csv(os, rows);
  const auto ls = lines(os.str());
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "epoch,objective,elbo_mean,elbo_se,param_error,acceptance_rate");
  EXPECT_EQ(ls[1].substr(0, 11), "1,sis,-3.5,");
  EXPECT_NE(ls[1].find("nan"), std::string::npos);
  EXPECT_NE(ls[2].find("0.25"), std::string::npos);
}

TEST(Serialize, GradEstimateLayout) {
  RandomStream rng(4, 0);
  const auto m = random_ppca(3, 1, 0.8, rng);
  const auto x = generate_data(m, 1, rng).front();
  Problem<PpcaModel, double> base{m, meanfield_encoder(m), make_fixed(2), {0.05}};
  const auto params = make_params(base, BlockSelection{});
  const auto g = grad_ais(base, params, x, 4, 5, true, AisKernel::kMala);
  const auto j = to_json(g);
  EXPECT_EQ(j.at("n").get<std::size_t>(), 4u);
  EXPECT_TRUE(j.at("use_cv").get<bool>());
  for (const char* k : {"pathwise", "score", "cv_correction"}) EXPECT_TRUE(j.at("terms").contains(k));
  for (const auto& e : g.grads.entries()) {
    EXPECT_EQ(j.at("grads").at(e.name).get<std::vector<double>>(), e.values);
  }
  EXPECT_TRUE(j.at("diagnostics").contains("score_variance"));
}

TEST(Serialize, ManifestWrittenToDisk) {
  RunManifest mf;
  mf.command = "ppca-bench";
  mf.config = {{"K", 5}};
  mf.seed = 7;
  mf.build_id = "test";
  mf.outputs = {"a.csv"};
  const std::string path = ::testing::TempDir() + "annealvi_manifest.json";
  write_json(path, to_json(mf));
  std::ifstream f(path);
  const json j = json::parse(f);
  EXPECT_EQ(j.at("command"), "ppca-bench");
  EXPECT_EQ(j.at("config").at("K"), 5);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(j.at("outputs").size(), 1u);
  std::remove(path.c_str());
  EXPECT_THROW(write_text("/nonexistent-dir/x.json", "{}"), std::runtime_error);
}

}  // namespace
}  // namespace annealvi
