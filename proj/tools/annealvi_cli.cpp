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

// Command-line runner for the desk-scale studies. Every command writes its
// data files plus manifest.json into --out.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "annealvi/annealvi.hpp"

#ifndef ANNEALVI_BUILD_ID
#define ANNEALVI_BUILD_ID "unknown"
#endif

namespace annealvi {
namespace {

using Clock = std::chrono::steady_clock;

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out = "annealvi_out";
  std::string model;
  std::string schedule = "fixed";
  double rho = 0.0;
  double eta0 = 0.1;
  std::size_t warmup_steps = 20;
};

struct BenchFlags {
  std::vector<std::string> estimators{"iwae", "sis", "ais", "ais_cv"};
  std::vector<std::size_t> steps{5, 10};
  std::size_t n_chains = 8;
  std::size_t reps = 200;
  std::size_t latent_dim = 4;
  std::size_t obs_dim = 16;
  std::size_t n_data = 20;
  std::string q = "learned";
};

struct ToyFlags {
  std::vector<std::string> estimators{"vae", "iwae", "sis", "ais"};
  std::vector<std::size_t> dims{2};
  std::size_t seeds = 5;
  std::size_t n_data = 500;
  std::size_t epochs = 300;
  std::size_t n_samples = 1000;
  std::size_t steps = 5;
  std::size_t grid = 61;
  double learning_rate = 1e-2;
};

struct GradcheckFlags {
  std::size_t fixtures = 10;
  std::size_t crn_reps = 2000;
  double tolerance = 1e-5;
  double z_limit = 4.0;
};

class Run {
 public:
  Run(std::string command, const CommonFlags& c) : start_(Clock::now()) {
    manifest_.command = std::move(command);
    manifest_.seed = c.seed;
    manifest_.build_id = ANNEALVI_BUILD_ID;
    dir_ = c.out;
    std::filesystem::create_directories(dir_);
  }
  json& config() { return manifest_.config; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) {
    write_text(path(name), text);
    manifest_.outputs.push_back(path(name));
  }
  void finish() {
    manifest_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    const std::string p = path("manifest.json");
    manifest_.outputs.push_back(p);
    write_json(p, to_json(manifest_));
    std::cout << "wrote " << p << "\n";
  }

 private:
  Clock::time_point start_;
  std::filesystem::path dir_;
  RunManifest manifest_;
};

void check_model(const CommonFlags& c, const char* expected) {
  if (c.model != expected) {
    throw std::invalid_argument(std::string("this command requires --model ") + expected);
  }
}

double target_rate(double rho, EstimatorKind kind) {
  if (rho > 0.0) return rho;
  return kind == EstimatorKind::kAis ? 0.8 : 0.9;
}

// Step size tuned towards the target acceptance rate.
template <template <class> class Model>
void tune_stepsize(Problem<Model, double>& p, const EstimatorOptions& o,
                   const std::vector<Vec<double>>& data, const CommonFlags& c, double rho) {
  StepSize step;
  step.eta0 = c.eta0;
  initialize_stepsize(p, step, data, 4, derive_seed(c.seed, 10, 0));
  for (std::size_t r = 0; r < c.warmup_steps; ++r)
    adaptation_round(p, step, o, data, rho, 1.0, 4, derive_seed(c.seed, 11, r));
}

std::vector<std::string> coordinate_names(const ParamSet& params) {
  std::vector<std::string> names;
  for (const auto& b : params.blocks())
    if (b.trainable)
      for (std::size_t i = 0; i < b.values.size(); ++i)
        names.push_back(b.name + "[" + std::to_string(i) + "]");
  return names;
}

int cmd_ppca_bench(const CommonFlags& c, const BenchFlags& f) {
  check_model(c, "ppca");
  if (f.q != "learned" && f.q != "posterior") throw std::invalid_argument("--q must be learned or posterior");
  if (f.reps == 0 || f.n_chains == 0 || f.n_data == 0) throw std::invalid_argument("--reps, --n-chains, --n-data must be positive");
  struct Variant {
    std::string name;
    EstimatorKind kind;
    std::size_t steps;
    bool cv;
  };
  std::vector<Variant> variants;
  for (const auto& e : f.estimators) {
    if (e == "iwae") {
      variants.push_back({e, EstimatorKind::kIwae, 1, false});
      continue;
    }
    const bool cv = e == "ais_cv";
    const EstimatorKind kind = cv ? EstimatorKind::kAis : parse_estimator_kind(e);
    if (kind != EstimatorKind::kSis && kind != EstimatorKind::kAis)
      throw std::invalid_argument("ppca-bench estimators: iwae, sis, ais, ais_cv");
    if (cv && f.n_chains < 2) throw std::invalid_argument("ais_cv needs --n-chains >= 2");
    for (std::size_t k : f.steps) variants.push_back({e, kind, k, cv});
  }
  const ScheduleKind schedule = parse_schedule_kind(c.schedule);

  Run run("ppca-bench", c);
  run.config() = {{"model", c.model},       {"estimators", f.estimators}, {"K", f.steps},
                  {"n_chains", f.n_chains}, {"reps", f.reps},             {"latent_dim", f.latent_dim},
                  {"obs_dim", f.obs_dim},   {"n_data", f.n_data},         {"q", f.q},
                  {"schedule", c.schedule}, {"rho", c.rho},               {"eta0", c.eta0},
                  {"warmup_steps", c.warmup_steps}};

  RandomStream rng(c.seed, 0);
  const bool posterior = f.q == "posterior";
  const auto model = posterior ? orthogonal_ppca(f.obs_dim, f.latent_dim, 0.8, rng)
                               : random_ppca(f.obs_dim, f.latent_dim, 0.8, rng);
  const auto data = generate_data(model, f.n_data, rng);
  std::vector<double> log_z;
  for (const auto& x : data) log_z.push_back(exact_log_evidence(model, x));
  const auto encoder = posterior ? conjugate_encoder(model) : meanfield_encoder(model);

  std::ostringstream rows, grads;
  rows << "estimator,K,rep,datapoint,logW_minus_logZ,accept_rate\n";
  grads << "estimator,K,rep,coordinate,grad\n";
  json summary = json::array();
  for (std::size_t s = 0; s < variants.size(); ++s) {
    const auto& variant = variants[s];
    Problem<PpcaModel, double> p{model, encoder, make_schedule(schedule, variant.steps),
                                 Vec<double>(f.latent_dim, 0.1)};
    GradOptions g;
    g.estimator.kind = variant.kind;
    g.use_cv = variant.cv;
    if (variant.kind == EstimatorKind::kIwae) {
      g.estimator.iwae_samples = f.n_chains;
      g.n = 1;
    } else {
      g.n = f.n_chains;
      tune_stepsize(p, g.estimator, data, c, target_rate(c.rho, variant.kind));
    }
    const ParamSet params = make_params(p);
    const auto names = coordinate_names(params);
    std::vector<double> gaps;
    double accept = 0.0;
    for (std::size_t r = 0; r < f.reps; ++r) {
      const std::size_t j = r % data.size();
      g.seed = derive_seed(c.seed, 20 + s, r);
      const GradEstimate est = estimate_gradient(p, params, data[j], g);
      const double gap = est.objective - log_z[j];
      gaps.push_back(gap);
      accept += est.accept_rate / static_cast<double>(f.reps);
      rows << variant.name << ',' << variant.steps << ',' << r << ',' << j << ',' << fmt(gap) << ','
           << fmt(est.accept_rate) << '\n';
      const auto flat = est.grads.flatten();
      for (std::size_t i = 0; i < flat.size(); ++i)
        grads << variant.name << ',' << variant.steps << ',' << r << ',' << names[i] << ',' << fmt(flat[i]) << '\n';
    }
    const auto [mean, var] = mean_variance(gaps);
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    summary.push_back({{"estimator", variant.name},
                       {"K", variant.steps},
                       {"n", f.reps},
                       {"mean", mean},
                       {"variance", var},
                       {"median", sorted[sorted.size() / 2]},
                       {"accept_rate", accept},
                       {"eta", p.eta}});
    std::cout << variant.name << " K=" << variant.steps << " mean(logW-logZ)=" << mean << "\n";
  }
  run.write("ppca_bench.csv", rows.str());
  run.write("ppca_bench_grads.csv", grads.str());
  run.write("ppca_bench_summary.json", summary.dump(2) + "\n");
  run.finish();
  return 0;
}

ToyModel<double> toy_truth(std::size_t latent_dim) {
  ToyModel<double> m;
  m.latent_dim = latent_dim;
  m.xi = 1.0;
  m.zeta = 0.0;
  m.sigma = 0.1;
  return m;
}

TrainConfig toy_config(const CommonFlags& c, const ToyFlags& f, EstimatorKind kind,
                       std::uint64_t seed) {
  TrainConfig cfg;
  cfg.objective = kind;
  cfg.steps = f.steps;
  cfg.schedule = parse_schedule_kind(c.schedule);
  cfg.rho = c.rho > 0.0 ? c.rho : (kind == EstimatorKind::kSis ? 0.97 : 0.0);
  cfg.eta0 = c.eta0;
  cfg.warmup_steps = c.warmup_steps;
  cfg.epochs = f.epochs;
  cfg.learning_rate = f.learning_rate;
  cfg.chains = kind == EstimatorKind::kAis ? 2 : 1;
  cfg.seed = seed;
  return cfg;
}

std::vector<EstimatorKind> toy_kinds(const ToyFlags& f) {
  std::vector<EstimatorKind> kinds;
  for (const auto& e : f.estimators) kinds.push_back(parse_estimator_kind(e));
  return kinds;
}

json toy_run_config(const CommonFlags& c, const ToyFlags& f) {
  return {{"model", c.model},     {"estimators", f.estimators}, {"K", f.steps},
          {"epochs", f.epochs},   {"learning_rate", f.learning_rate},
          {"schedule", c.schedule}, {"rho", c.rho},             {"eta0", c.eta0},
          {"warmup_steps", c.warmup_steps}};
}

int cmd_toy_posterior(const CommonFlags& c, const ToyFlags& f) {
  check_model(c, "toy");
  if (f.n_samples == 0 || f.grid < 2) throw std::invalid_argument("--n-samples >= 1 and --grid >= 2 required");
  const auto kinds = toy_kinds(f);
  Run run("toy-posterior", c);
  run.config() = toy_run_config(c, f);
  run.config()["n_samples"] = f.n_samples;
  run.config()["grid"] = f.grid;

  const auto truth = toy_truth(2);
  RandomStream rng(c.seed, 0);
  const auto data = generate_data(truth, 1, rng);
  const Vec<double>& x = data.front();

  std::ostringstream samples;
  samples << "method,sample,z1,z2,log_joint\n";
  json summary = json::array();
  for (std::size_t m = 0; m < kinds.size(); ++m) {
    const EstimatorKind kind = kinds[m];
    Problem<ToyModel, double> p{truth, AffineEncoder<double>::standard_normal(1, 2), make_fixed(1), {0.1, 0.1}};
    const auto fit = fit_vi(p, data, toy_config(c, f, kind, derive_seed(c.seed, 30, m)));
    EstimatorOptions o;
    o.kind = kind;
    const bool chain = kind == EstimatorKind::kSis || kind == EstimatorKind::kAis;
    std::vector<double> logs;
    for (std::size_t i = 0; i < f.n_samples; ++i) {
      const std::uint64_t seed = derive_seed(c.seed, 31, m);
      Vec<double> z;
      if (chain) {
        z = run_chain(o, fit.problem, x, chain_noise(o, seed, i, 2, fit.problem.steps())).z.back();
      } else {
        RandomStream s(seed, i);
        z = reparam_sample(encode(fit.problem.encoder, x), s.normal_vector(2));
      }
      const double lj = truth.evaluate(x, z, false).logp;
      logs.push_back(lj);
      samples << to_string(kind) << ',' << i << ',' << fmt(z[0]) << ',' << fmt(z[1]) << ',' << fmt(lj) << '\n';
    }
    const auto [mean, var] = logs.size() > 1 ? mean_variance(logs) : std::pair{logs[0], 0.0};
    summary.push_back({{"method", to_string(kind)},
                       {"n", logs.size()},
                       {"mean_log_joint", mean},
                       {"se_log_joint", std::sqrt(var / static_cast<double>(logs.size()))},
                       {"final_elbo", fit.history.back().elbo_mean},
                       {"eta", fit.problem.eta}});
  }

  std::ostringstream grid;
  grid << "z1,z2,log_joint\n";
  for (std::size_t i = 0; i < f.grid; ++i) {
    for (std::size_t j = 0; j < f.grid; ++j) {
      const double step = 6.0 / static_cast<double>(f.grid - 1);
      const Vec<double> z{-3.0 + step * static_cast<double>(i), -3.0 + step * static_cast<double>(j)};
      grid << fmt(z[0]) << ',' << fmt(z[1]) << ',' << fmt(truth.evaluate(x, z, false).logp) << '\n';
    }
  }
  run.write("toy_posterior_samples.csv", samples.str());
  run.write("toy_posterior_grid.csv", grid.str());
  run.write("toy_posterior_summary.json",
            json{{"x", x[0]}, {"truth", to_json(truth)}, {"methods", summary}}.dump(2) + "\n");
  run.finish();
  return 0;
}

int cmd_toy_param_est(const CommonFlags& c, const ToyFlags& f) {
  check_model(c, "toy");
  if (f.seeds == 0 || f.n_data == 0) throw std::invalid_argument("--seeds and --n-data must be positive");
  const auto kinds = toy_kinds(f);
  Run run("toy-param-est", c);
  run.config() = toy_run_config(c, f);
  run.config()["seeds"] = f.seeds;
  run.config()["dims"] = f.dims;
  run.config()["n_data"] = f.n_data;

  std::ostringstream rows;
  rows << "method,dim,seed,param_error,xi,zeta,final_elbo\n";
  for (std::size_t d : f.dims) {
    if (d == 0) throw std::invalid_argument("--dims entries must be positive");
    const auto truth = toy_truth(d);
    for (std::size_t s = 0; s < f.seeds; ++s) {
      const std::uint64_t seed = derive_seed(c.seed, 40 + d, s);
      RandomStream rng(seed, 0);
      const auto data = generate_data(truth, f.n_data, rng);
      ToyModel<double> init = truth;
      init.xi = 0.5;
      init.zeta = 0.5;
      for (EstimatorKind kind : kinds) {
        Problem<ToyModel, double> p{init, AffineEncoder<double>::standard_normal(1, d), make_fixed(1),
                                    Vec<double>(d, 0.1)};
        const auto fit = fit_model(p, data, toy_config(c, f, kind, seed), truth);
        rows << to_string(kind) << ',' << d << ',' << s << ',' << fmt(fit.param_error) << ','
             << fmt(fit.problem.model.xi) << ',' << fmt(fit.problem.model.zeta) << ','
             << fmt(fit.history.back().elbo_mean) << '\n';
        std::cout << to_string(kind) << " d=" << d << " seed=" << s << " err=" << fit.param_error << "\n";
      }
    }
  }
  run.write("toy_param_est.csv", rows.str());
  run.finish();
  return 0;
}

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass() const { return value <= threshold; }
};

Problem<PpcaModel, double> gradcheck_fixture(std::uint64_t seed, std::size_t steps, ScheduleKind kind, Vec<double>* x) {
  RandomStream rng(seed, 0);
  const auto m = random_ppca(4, 2, 0.9, rng, 0.7);
  auto enc = meanfield_encoder(m);
  for (double& v : enc.mean_b) v += 0.3 * rng.normal();
  *x = generate_data(m, 1, rng).front();
  return {m, enc, make_schedule(kind, steps), {0.05 + 0.1 * rng.uniform(), 0.05 + 0.1 * rng.uniform()}};
}

int cmd_gradcheck(const CommonFlags& c, const GradcheckFlags& f) {
  Run run("gradcheck", c);
  run.config() = {{"fixtures", f.fixtures}, {"crn_reps", f.crn_reps}, {"tolerance", f.tolerance},
                  {"z_limit", f.z_limit}};
  const ScheduleKind kinds[] = {ScheduleKind::kFixed, ScheduleKind::kSigmoidal, ScheduleKind::kLearnable};
  const std::size_t steps = 3, n = 2;
  double sis = 0.0, iw = 0.0, ais = 0.0, score = 0.0;
  for (std::size_t i = 0; i < f.fixtures; ++i) {
    Vec<double> x;
    const auto p = gradcheck_fixture(derive_seed(c.seed, 50, i), steps, kinds[i % 3], &x);
    const ParamSet params = make_params(p, BlockSelection{true, true, true, true});
    const std::uint64_t seed = derive_seed(c.seed, 51, i);
    const auto bound = [&](const BlockValues<double>& b) { return bind_problem<PpcaModel, double>(p, b); };
    EstimatorOptions o;

    o.kind = EstimatorKind::kSis;
    const auto fd_sis = finite_diff_grad(
        [&](const BlockValues<double>& b) {
          double w = 0.0;
          for (std::size_t k = 0; k < n; ++k) w += sis_estimate(bound(b), x, chain_noise(o, seed, k, 2, steps)).log_w;
          return w / static_cast<double>(n);
        },
        params);
    sis = std::max(sis, relative_error(grad_sis(p, params, x, n, seed).grads, fd_sis));

    o.kind = EstimatorKind::kIwae;
    o.iwae_samples = 4;
    const ChainNoise iw_noise = chain_noise(o, seed, 0, 2, 1);
    const auto fd_iw = finite_diff_grad(
        [&](const BlockValues<double>& b) { return iwae(bound(b), x, iw_noise.u0); }, params);
    iw = std::max(iw, relative_error(grad_iwae(p, params, x, 4, seed).grads, fd_iw));

    o.kind = EstimatorKind::kAis;
    std::vector<ChainNoise> noise;
    std::vector<std::vector<std::uint8_t>> bits;
    for (std::size_t k = 0; k < n; ++k) {
      noise.push_back(chain_noise(o, seed, k, 2, steps));
      bits.push_back(ais_estimate(p, x, noise.back()).accepted);
    }
    const auto fd_ais = finite_diff_grad(
        [&](const BlockValues<double>& b) {
          double w = 0.0;
          for (std::size_t k = 0; k < n; ++k) w += replay_ais_log_w(p, b, x, noise[k], bits[k]);
          return w / static_cast<double>(n);
        },
        params);
    ais = std::max(ais, relative_error(grad_ais(p, params, x, n, seed, false).pathwise, fd_ais));

    const auto ad_score = score_log_accept(p, params, x, noise[0], bits[0]);
    const auto fd_score = finite_diff_grad(
        [&](const BlockValues<double>& b) {
          return ais_estimate(bound(b), x, noise[0], AisOptions{AisKernel::kMala, &bits[0]}).log_a;
        },
        params);
    score = std::max(score, relative_error(ad_score, fd_score));
  }

  // Statistical check of the full AIS gradient against CRN differences.
  Vec<double> x;
  const auto p = gradcheck_fixture(derive_seed(c.seed, 52, 0), steps, ScheduleKind::kFixed, &x);
  const ParamSet params = make_params(p);
  EstimatorOptions o;
  o.kind = EstimatorKind::kAis;
  const std::size_t chains = 4;
  std::vector<double> g_sum, g_sq, d_sum, d_sq;
  const auto objective = [&](const ParamSet& ps, std::uint64_t seed) {
    const auto q = bind_problem<PpcaModel, double>(p, values_of(ps));
    double w = 0.0;
    for (std::size_t k = 0; k < chains; ++k) w += ais_estimate(q, x, chain_noise(o, seed, k, 2, steps)).log_w;
    return w / static_cast<double>(chains);
  };
  for (std::size_t r = 0; r < f.crn_reps; ++r) {
    const std::uint64_t seed = derive_seed(c.seed, 53, r);
    const auto g = grad_ais(p, params, x, chains, seed, true).grads.flatten();
    std::vector<double> d;
    ParamSet work = params;
    for (auto& block : work.blocks()) {
      if (!block.trainable) continue;
      for (double& v : block.values) {
        const double v0 = v, h = block.name == "eta" ? 0.25 * v0 : 0.05;
        v = v0 + h;
        const double fp = objective(work, seed);
        v = v0 - h;
        const double fm = objective(work, seed);
        v = v0;
        d.push_back((fp - fm) / (2.0 * h));
      }
    }
    if (g_sum.empty()) g_sum = g_sq = d_sum = d_sq = std::vector<double>(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g_sum[i] += g[i];
      g_sq[i] += g[i] * g[i];
      d_sum[i] += d[i];
      d_sq[i] += d[i] * d[i];
    }
  }
  double worst_z = 0.0;
  const double reps = static_cast<double>(f.crn_reps);
  for (std::size_t i = 0; i < g_sum.size(); ++i) {
    const double gm = g_sum[i] / reps, dm = d_sum[i] / reps;
    const double gv = std::max(g_sq[i] / reps - gm * gm, 0.0) / reps;
    const double dv = std::max(d_sq[i] / reps - dm * dm, 0.0) / reps;
    worst_z = std::max(worst_z, std::abs(gm - dm) / std::sqrt(gv + dv));
  }

  const std::vector<CheckResult> checks = {{"grad_sis_vs_fd", sis, f.tolerance},
                                           {"grad_iwae_vs_fd", iw, f.tolerance},
                                           {"ais_pathwise_vs_fd", ais, f.tolerance},
                                           {"score_log_accept_vs_fd", score, f.tolerance},
                                           {"grad_ais_vs_crn_fd_z", worst_z, f.z_limit}};
  json report = json::array();
  bool ok = true;
  for (const auto& r : checks) {
    ok = ok && r.pass();
    report.push_back({{"name", r.name}, {"max_error", r.value}, {"threshold", r.threshold}, {"pass", r.pass()}});
    std::cout << (r.pass() ? "PASS " : "FAIL ") << r.name << " " << r.value << " (threshold " << r.threshold << ")\n";
  }
  run.write("gradcheck.json", json{{"pass", ok}, {"checks", report}}.dump(2) + "\n");
  run.finish();
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace annealvi

int main(int argc, char** argv) {
  using namespace annealvi;
  CLI::App app{"annealvi experiment runner"};
  app.require_subcommand(1);
  CommonFlags common;
  BenchFlags bench;
  ToyFlags toy;
  GradcheckFlags check;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--model", common.model, "model family")->check(CLI::IsMember({"ppca", "toy"}));
    sub->add_option("--schedule", common.schedule, "annealing schedule")
        ->check(CLI::IsMember({"fixed", "sigmoidal", "learnable"}));
    sub->add_option("--rho", common.rho, "target acceptance rate (0: per-kernel default)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--eta0", common.eta0, "initial step-size scale")->check(CLI::PositiveNumber);
    sub->add_option("--warmup-steps", common.warmup_steps, "step-size adaptation rounds");
  };

  auto* ppca = app.add_subcommand("ppca-bench", "estimator and gradient replicates on pPCA");
  add_common(ppca);
  ppca->add_option("--estimators", bench.estimators, "iwae,sis,ais,ais_cv")->delimiter(',');
  ppca->add_option("--K", bench.steps, "annealing steps (list)")->delimiter(',');
  ppca->add_option("--n-chains", bench.n_chains, "chains per replicate (IWAE samples for iwae)");
  ppca->add_option("--reps", bench.reps, "replicates per estimator");
  ppca->add_option("--dims", bench.latent_dim, "latent dimension d");
  ppca->add_option("--obs-dim", bench.obs_dim, "observed dimension p");
  ppca->add_option("--n-data", bench.n_data, "number of observations");
  ppca->add_option("--q", bench.q, "encoder")->check(CLI::IsMember({"learned", "posterior"}));

  const auto add_toy = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--estimators", toy.estimators, "vae,iwae,sis,ais")->delimiter(',');
    sub->add_option("--K", toy.steps, "annealing steps");
    sub->add_option("--epochs", toy.epochs, "training epochs");
    sub->add_option("--learning-rate", toy.learning_rate, "Adam learning rate");
  };
  auto* posterior = app.add_subcommand("toy-posterior", "posterior samples on one toy observation");
  add_toy(posterior);
  posterior->add_option("--n-samples", toy.n_samples, "samples per method");
  posterior->add_option("--grid", toy.grid, "grid points per axis over [-3,3]");

  auto* param = app.add_subcommand("toy-param-est", "toy parameter recovery per method and seed");
  add_toy(param);
  param->add_option("--seeds", toy.seeds, "number of seeds");
  param->add_option("--dims", toy.dims, "latent dimensions (list)")->delimiter(',');
  param->add_option("--n-data", toy.n_data, "number of observations");

  auto* grad = app.add_subcommand("gradcheck", "gradient oracle suite");
  add_common(grad);
  grad->add_option("--fixtures", check.fixtures, "random fixtures for the FD checks");
  grad->add_option("--crn-reps", check.crn_reps, "replicates for the CRN check");
  grad->add_option("--break-tolerance", check.tolerance, "relative-error threshold");

  CLI11_PARSE(app, argc, argv);
  if (common.model.empty()) common.model = (*posterior || *param) ? "toy" : "ppca";
  try {
    if (*ppca) return cmd_ppca_bench(common, bench);
    if (*posterior) return cmd_toy_posterior(common, toy);
    if (*param) return cmd_toy_param_est(common, toy);
    if (*grad) return cmd_gradcheck(common, check);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
