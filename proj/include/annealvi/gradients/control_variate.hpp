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

#include <stdexcept>
#include <vector>

namespace annealvi {

// Mean of the other n - 1 log-weights: (n - 1)^-1 sum_{j != i} W_j.
inline double leave_one_out_baseline(const std::vector<double>& w, std::size_t i) {
  if (w.size() < 2) throw std::invalid_argument("leave_one_out_baseline: need n >= 2");
  if (i >= w.size()) throw std::out_of_range("leave_one_out_baseline: index out of range");
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (j != i) s += w[j];
  return s / static_cast<double>(w.size() - 1);
}

inline std::vector<double> leave_one_out_baselines(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = leave_one_out_baseline(w, i);
  return out;
}

}  // namespace annealvi
