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

#include <cstdint>
#include <stdexcept>
#include <string>

#include "annealvi/annealing/schedule.hpp"
#include "annealvi/estimators/batch.hpp"

namespace annealvi {

struct TrainConfig {
  EstimatorKind objective = EstimatorKind::kSis;
  std::size_t steps = 5;         // K
  std::size_t chains = 1;        // chains per datapoint in each gradient batch
  std::size_t iwae_samples = 5;  // for the iwae objective
  ScheduleKind schedule = ScheduleKind::kFixed;
  AisKernel kernel = AisKernel::kMala;
  bool use_cv = true;            // effective only for AIS with chains >= 2
  bool train_eta = false;        // eta is adapted rather than trained by default
  double rho = 0.0;              // target acceptance; 0 selects 0.8 (AIS) or 0.9 (SIS)
  double eta0 = 0.1;
  double epsilon = 1e-2;
  double eta0_gain = 1.0;
  std::size_t warmup_steps = 20;
  std::size_t adapt_every = 1;   // epochs between re-adaptation rounds; 0 disables
  std::size_t epochs = 30;
  std::size_t batch_size = 0;    // 0 = full batch
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;

  bool annealed() const { return objective == EstimatorKind::kSis || objective == EstimatorKind::kAis; }

  double target_rate() const {
    if (rho > 0.0) return rho;
    return objective == EstimatorKind::kAis ? 0.8 : 0.9;
  }

  void validate() const {
    if (steps == 0 || chains == 0 || iwae_samples == 0 || epochs == 0) {
      throw std::invalid_argument("TrainConfig: counts must be at least 1");
    }
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("TrainConfig: rho must lie in (0, 1)");
    if (!(eta0 > 0.0) || !(epsilon > 0.0) || !(eta0_gain > 0.0)) {
      throw std::invalid_argument("TrainConfig: eta0, epsilon and eta0_gain must be positive");
    }
    if (learning_rate < 0.0) throw std::invalid_argument("TrainConfig: negative learning rate");
  }

  EstimatorOptions estimator() const {
    EstimatorOptions o;
    o.kind = objective;
    o.iwae_samples = iwae_samples;
    o.kernel = kernel;
    return o;
  }
};

}  // namespace annealvi
