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

#include "annealvi/diffmath/gaussian.hpp"
#include "annealvi/diffmath/params.hpp"
#include "annealvi/diffmath/tape.hpp"
#include "annealvi/diffmath/vector_ops.hpp"
#include "annealvi/errors.hpp"
#include "annealvi/random.hpp"

#include "annealvi/models/encoder.hpp"
#include "annealvi/models/ppca.hpp"
#include "annealvi/models/ppca_exact.hpp"
#include "annealvi/models/toy.hpp"

#include "annealvi/annealing/bridge.hpp"
#include "annealvi/annealing/problem.hpp"
#include "annealvi/annealing/schedule.hpp"

#include "annealvi/kernels/langevin.hpp"
#include "annealvi/kernels/metropolis.hpp"
#include "annealvi/kernels/stepsize.hpp"

#include "annealvi/estimators/ais.hpp"
#include "annealvi/estimators/batch.hpp"
#include "annealvi/estimators/elbo.hpp"
#include "annealvi/estimators/sis.hpp"
#include "annealvi/estimators/trajectory.hpp"

#include "annealvi/gradients/control_variate.hpp"
#include "annealvi/gradients/grad_estimate.hpp"

#include "annealvi/training/config.hpp"
#include "annealvi/training/fit.hpp"
#include "annealvi/training/optimizer.hpp"

#include "annealvi/io/serialize.hpp"
