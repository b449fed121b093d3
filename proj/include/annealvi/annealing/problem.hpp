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

#include "annealvi/annealing/schedule.hpp"
#include "annealvi/models/encoder.hpp"
#include "annealvi/models/ppca.hpp"
#include "annealvi/models/toy.hpp"

namespace annealvi {

// Everything an estimator needs besides the observation and the noise:
// target model, variational encoder, annealing schedule and per-coordinate
// step sizes (one per latent coordinate of a single observation block).
template <template <class> class Model, class T>
struct Problem {
  Model<T> model;
  AffineEncoder<T> encoder;
  AnnealingSchedule<T> schedule;
  Vec<T> eta;

  std::size_t steps() const { return schedule.steps(); }
};

// Which parts of a problem are exposed as trainable blocks.
struct BlockSelection {
  bool model = false;
  bool encoder = true;
  bool eta = true;
  bool schedule = true;
};

template <template <class> class Model>
ParamSet make_params(const Problem<Model, double>& p, BlockSelection sel = {}) {
  ParamSet params;
  add_model_blocks(params, p.model, sel.model);
  add_encoder_blocks(params, p.encoder, sel.encoder);
  params.add("eta", p.eta, sel.eta);
  add_schedule_block(params, p.schedule, sel.schedule);
  return params;
}

// Rebuilds the problem in scalar type T, taking every block present in
// `blocks` and falling back to `base` for the rest.
template <template <class> class Model, class T>
Problem<Model, T> bind_problem(const Problem<Model, double>& base, const BlockValues<T>& blocks) {
  Problem<Model, T> p;
  p.model = bind_model(base.model, blocks);
  p.encoder = bind_encoder(base.encoder, blocks);
  p.schedule = bind_schedule(base.schedule, blocks);
  const auto* eta = blocks.find("eta");
  p.eta = eta ? *eta : lift<T>(base.eta);
  require_same_size(p.eta.size(), p.encoder.out_dim, "Problem eta");
  return p;
}

template <template <class> class Model>
Problem<Model, double> with_params(Problem<Model, double> base, const ParamSet& params) {
  base.model = with_params(base.model, params);
  base.encoder = with_params(base.encoder, params);
  base.schedule = with_params(base.schedule, params);
  if (const auto* eta = params.find("eta")) base.eta = eta->values;
  return base;
}

}  // namespace annealvi
