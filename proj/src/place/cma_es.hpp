// Copyright 2026 The scanrig Authors
//
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
#include <functional>
#include <limits>
#include <vector>

#include "common/types.hpp"

namespace scanrig {

struct CmaConfig {
  int population = 0;  // 0 selects 4 + floor(3 ln n)
  double sigma0 = 0.5;
  int max_generations = 500;  // per run
  double target = -std::numeric_limits<double>::infinity();
  int restarts = 3;  // additional runs with doubled population
  uint64_t seed = 1;

  // Throws unless the population is 0 or >= 4 and sigma0 > 0.
  void validate() const;
};

struct CmaResult {
  VecX x_best;
  double f_best = std::numeric_limits<double>::infinity();
  int generations = 0;  // over all runs
  int evaluations = 0;
  int runs = 0;
  bool reached_target = false;
  std::vector<double> sigma_history;  // step size after each generation
};

using Objective = std::function<double(const VecX&)>;

// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation and
// rank-one plus rank-mu covariance updates. Each restart begins again at x0
// with twice the previous population. Non-finite samples rank last; a
// non-finite value at x0 throws kNumerical.
CmaResult cmaMinimize(const Objective& objective, const VecX& x0, const CmaConfig& cfg);

}  // namespace scanrig
