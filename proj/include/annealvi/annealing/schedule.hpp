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
#include <stdexcept>
#include <string>
#include <string_view>

#include "annealvi/diffmath/params.hpp"
#include "annealvi/diffmath/vector_ops.hpp"

namespace annealvi {

enum class ScheduleKind { kFixed, kSigmoidal, kLearnable };

inline std::string_view to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::kFixed: return "fixed";
    case ScheduleKind::kSigmoidal: return "sigmoidal";
    case ScheduleKind::kLearnable: return "learnable";
  }
  return "unknown";
}

inline ScheduleKind parse_schedule_kind(std::string_view s) {
  if (s == "fixed") return ScheduleKind::kFixed;
  if (s == "sigmoidal") return ScheduleKind::kSigmoidal;
  if (s == "learnable") return ScheduleKind::kLearnable;
  throw std::invalid_argument("unknown schedule kind '" + std::string(s) + "'");
}

// Temperature ladder 0 = beta_0 < ... < beta_K = 1. `raw` holds the
// unconstrained parameters (empty for kFixed, softplus^{-1}(delta) for
// kSigmoidal, K logits for kLearnable).
template <class T>
struct AnnealingSchedule {
  ScheduleKind kind = ScheduleKind::kFixed;
  Vec<T> raw;
  Vec<T> betas;

  std::size_t steps() const { return betas.size() - 1; }

  const T& beta(std::size_t k) const {
    if (k >= betas.size()) {
      throw std::out_of_range("AnnealingSchedule: index " + std::to_string(k) +
                              " outside [0, " + std::to_string(steps()) + "]");
    }
    return betas[k];
  }
};

inline void require_steps(std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("annealing schedule needs K >= 1");
}

template <class T = double>
AnnealingSchedule<T> make_fixed(std::size_t steps) {
  require_steps(steps);
  AnnealingSchedule<T> s;
  s.kind = ScheduleKind::kFixed;
  s.betas.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    s.betas[k] = static_cast<double>(k) / static_cast<double>(steps);
  }
  return s;
}

// delta = softplus(raw_delta); tilde_k = sigmoid(delta (2k/K - 1));
// beta_k = (tilde_k - tilde_0) / (tilde_K - tilde_0).
template <class T>
AnnealingSchedule<T> make_sigmoidal(std::size_t steps, const T& raw_delta) {
  require_steps(steps);
  AnnealingSchedule<T> s;
  s.kind = ScheduleKind::kSigmoidal;
  s.raw = {raw_delta};
  const T delta = softplus(raw_delta);
  const double kk = static_cast<double>(steps);
  const T lo = sigmoid(-delta);
  const T hi = sigmoid(delta);
  const T span = hi - lo;
  s.betas.resize(steps + 1);
  s.betas[0] = 0.0;
  s.betas[steps] = 1.0;
  for (std::size_t k = 1; k < steps; ++k) {
    s.betas[k] = (sigmoid(delta * (2.0 * static_cast<double>(k) / kk - 1.0)) - lo) / span;
  }
  return s;
}

// Increments are the normalised exponentials of `raw`; beta is their
// cumulative sum.
template <class T>
AnnealingSchedule<T> make_learnable(std::size_t steps, const Vec<T>& raw) {
  require_steps(steps);
  require_same_size(raw.size(), steps, "make_learnable raw increments");
  AnnealingSchedule<T> s;
  s.kind = ScheduleKind::kLearnable;
  s.raw = raw;
  double shift = value_of(raw[0]);
  for (const T& r : raw) shift = std::max(shift, value_of(r));
  Vec<T> e(steps);
  T total = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    e[k] = exp(raw[k] - shift);
    total += e[k];
  }
  for (auto& v : e) v = v / total;
  const Vec<T> cum = cumulative_sum(e);
  s.betas.resize(steps + 1);
  s.betas[0] = 0.0;
  for (std::size_t k = 1; k < steps; ++k) s.betas[k] = cum[k - 1];
  s.betas[steps] = 1.0;
  return s;
}

inline double softplus_inverse(double y) { return y > 20.0 ? y : std::log(std::expm1(y)); }

// Default parameterisation: delta = 1 for sigmoidal, equal logits for learnable.
inline AnnealingSchedule<double> make_schedule(ScheduleKind kind, std::size_t steps) {
  switch (kind) {
    case ScheduleKind::kFixed: return make_fixed(steps);
    case ScheduleKind::kSigmoidal: return make_sigmoidal<double>(steps, softplus_inverse(1.0));
    case ScheduleKind::kLearnable: return make_learnable<double>(steps, Vec<double>(steps, 0.0));
  }
  throw std::invalid_argument("make_schedule: unknown kind");
}

template <class T>
bool is_valid_schedule(const AnnealingSchedule<T>& s) {
  if (s.betas.size() < 2) return false;
  if (value_of(s.betas.front()) != 0.0 || value_of(s.betas.back()) != 1.0) return false;
  for (std::size_t k = 1; k < s.betas.size(); ++k) {
    if (!(value_of(s.betas[k]) > value_of(s.betas[k - 1]))) return false;
  }
  return true;
}

inline void add_schedule_block(ParamSet& params, const AnnealingSchedule<double>& s,
                               bool trainable) {
  if (s.kind != ScheduleKind::kFixed) params.add("schedule", s.raw, trainable);
}

template <class T>
AnnealingSchedule<T> bind_schedule(const AnnealingSchedule<double>& base,
                                   const BlockValues<T>& blocks) {
  const auto* raw = blocks.find("schedule");
  switch (base.kind) {
    case ScheduleKind::kFixed: return make_fixed<T>(base.steps());
    case ScheduleKind::kSigmoidal:
      return make_sigmoidal<T>(base.steps(), raw ? raw->at(0) : T(base.raw.at(0)));
    case ScheduleKind::kLearnable:
      return make_learnable<T>(base.steps(), raw ? *raw : lift<T>(base.raw));
  }
  throw std::invalid_argument("bind_schedule: unknown kind");
}

inline AnnealingSchedule<double> with_params(const AnnealingSchedule<double>& base,
                                             const ParamSet& params) {
  BlockValues<double> b;
  if (const auto* raw = params.find("schedule")) b.add("schedule", raw->values);
  return bind_schedule(base, b);
}

}  // namespace annealvi
