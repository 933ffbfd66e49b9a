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

#include <string>

namespace scanrig {

enum class ClosestPointMode { kSurface, kVertex };

// Weights and schedule for body fitting. Call validate() after changing
// fields; every consumer does so as well.
struct FitConfig {
  double lambda_j = 3000.0;
  double lambda_i = 1.0;
  double lambda_o = 25.0;
  double w_theta = 1e-3;
  double w_beta = 1e-3;
  int max_outer_iterations = 50;
  int inner_steps = 20;
  double tolerance = 1e-6;
  int stage_a_iterations = 100;
  ClosestPointMode closest_mode = ClosestPointMode::kSurface;
  // Permit fitting from the scan alone when no joint is valid.
  bool allow_mesh_only = false;

  // Throws kInvalidInput on negative or non-finite weights, lambda_i >=
  // lambda_o, or non-positive iteration counts.
  void validate() const;
};

// Convenience constructor that validates.
FitConfig makeFitConfig(double lambda_j, double lambda_i, double lambda_o, double w_theta, double w_beta);

const char* toString(ClosestPointMode mode);
ClosestPointMode closestPointModeFromString(const std::string& s);

}  // namespace scanrig
