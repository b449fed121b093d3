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

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "annealvi/gradients/grad_estimate.hpp"
#include "annealvi/training/fit.hpp"

namespace annealvi {

using json = nlohmann::json;

// Model fixtures.
//   pPCA: {"type": "ppca", "sigma": s, "theta0": [p], "theta1": [[d] x p]}
//   toy:  {"type": "toy", "sigma": s, "latent_dim": d, "xi": xi, "zeta": zeta}
inline json to_json(const PpcaModel<double>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.obs_dim; ++r) {
    rows.push_back(std::vector<double>(m.theta1.begin() + static_cast<std::ptrdiff_t>(r * m.latent_dim),
                                       m.theta1.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.latent_dim)));
  }
  return {{"type", "ppca"}, {"sigma", m.sigma}, {"theta0", m.theta0}, {"theta1", rows}};
}

inline json to_json(const ToyModel<double>& m) {
  return {{"type", "toy"}, {"sigma", m.sigma}, {"latent_dim", m.latent_dim}, {"xi", m.xi},
          {"zeta", m.zeta}};
}

inline void require_type(const json& j, const char* type) {
  if (!j.contains("type") || j.at("type") != type) {
    throw std::invalid_argument(std::string("fixture: expected type '") + type + "'");
  }
}

inline PpcaModel<double> ppca_from_json(const json& j) {
  require_type(j, "ppca");
  PpcaModel<double> m;
  m.sigma = j.at("sigma").get<double>();
  m.theta0 = j.at("theta0").get<std::vector<double>>();
  const auto rows = j.at("theta1").get<std::vector<std::vector<double>>>();
  m.obs_dim = m.theta0.size();
  require_same_size(rows.size(), m.obs_dim, "fixture theta1 rows");
  m.latent_dim = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    require_same_size(r.size(), m.latent_dim, "fixture theta1 row");
    m.theta1.insert(m.theta1.end(), r.begin(), r.end());
  }
  m.validate();
  return m;
}

inline ToyModel<double> toy_from_json(const json& j) {
  require_type(j, "toy");
  ToyModel<double> m;
  m.sigma = j.at("sigma").get<double>();
  m.latent_dim = j.value("latent_dim", std::size_t{2});
  m.xi = j.at("xi").get<double>();
  m.zeta = j.at("zeta").get<double>();
  m.validate();
  return m;
}

// {"type": "affine", "in_dim", "out_dim", "mean_w", "mean_b", "logstd_w", "logstd_b"}
// with the weight matrices flattened row-major (out_dim x in_dim).
inline json to_json(const AffineEncoder<double>& e) {
  return {{"type", "affine"},        {"in_dim", e.in_dim},     {"out_dim", e.out_dim},
          {"mean_w", e.mean_w},      {"mean_b", e.mean_b},     {"logstd_w", e.logstd_w},
          {"logstd_b", e.logstd_b}};
}

inline AffineEncoder<double> encoder_from_json(const json& j) {
  require_type(j, "affine");
  AffineEncoder<double> e;
  e.in_dim = j.at("in_dim").get<std::size_t>();
  e.out_dim = j.at("out_dim").get<std::size_t>();
  e.mean_w = j.at("mean_w").get<std::vector<double>>();
  e.mean_b = j.at("mean_b").get<std::vector<double>>();
  e.logstd_w = j.at("logstd_w").get<std::vector<double>>();
  e.logstd_b = j.at("logstd_b").get<std::vector<double>>();
  e.validate();
  return e;
}

inline json to_json(const GradReport& g) {
  json j = json::object();
  for (const auto& e : g.entries()) j[e.name] = e.values;
  return j;
}

// Full-precision CSV number formatting.
inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

// Columns: seed,stream,logW,logA,accept_count,accept_rate
inline void write_csv(std::ostream& os, const EstimateBatch& b) {
  os << "seed,stream,logW,logA,accept_count,accept_rate\n";
  for (const auto& r : b.rows) {
    os << b.seed << ',' << r.stream << ',' << fmt(r.log_w) << ',' << fmt(r.log_a) << ','
       << r.accept_count << ',' << fmt(r.accept_rate) << '\n';
  }
}

inline json summary_json(const EstimateBatch& b) {
  return {{"n", b.n()},
          {"seed", b.seed},
          {"mean", b.mean},
          {"variance", b.variance},
          {"log_mean_exp", b.log_mean_exp},
          {"accept_rate", b.mean_accept_rate()},
          {"wall_seconds", b.wall_seconds}};
}

inline json to_json(const GradEstimate& g) {
  return {{"n", g.n},
          {"use_cv", g.use_cv},
          {"objective", g.objective},
          {"accept_rate", g.accept_rate},
          {"grads", to_json(g.grads)},
          {"terms",
           {{"pathwise", to_json(g.pathwise)},
            {"score", to_json(g.score)},
            {"cv_correction", to_json(g.cv_correction)}}},
          {"diagnostics",
           {{"pathwise_variance", to_json(g.pathwise_variance)},
            {"score_variance", to_json(g.score_variance)},
            {"cv_variance", to_json(g.cv_variance)}}}};
}

// Columns: epoch,objective,elbo_mean,elbo_se,param_error,acceptance_rate
inline void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows) {
  os << "epoch,objective,elbo_mean,elbo_se,param_error,acceptance_rate\n";
  for (const auto& r : rows) {
    os << r.epoch << ',' << r.objective << ',' << fmt(r.elbo_mean) << ',' << fmt(r.elbo_se)
       << ',' << fmt(r.param_error) << ',' << fmt(r.acceptance_rate) << '\n';
  }
}

struct RunManifest {
  std::string command;
  json config = json::object();
  std::uint64_t seed = 0;
  std::string build_id;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
};

inline json to_json(const RunManifest& m) {
  return {{"command", m.command},       {"config", m.config},
          {"seed", m.seed},             {"build_id", m.build_id},
          {"wall_seconds", m.wall_seconds}, {"outputs", m.outputs}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace annealvi
