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

#include <optional>
#include <vector>

#include "place/cma_es.hpp"
#include "place/placement_loss.hpp"

namespace scanrig {

struct PlacementOptions {
  CmaConfig cma;  // sigma0 <= 0 selects 0.3 x the scene bounds diagonal
  double yaw_spread = 0.1;  // radians between consecutive initial yaws

  static PlacementOptions defaults();
};

struct PlacementOutcome {
  bool success = false;
  std::vector<PlacementParams> params;  // best found, also on failure
  PlacementLoss loss;                   // at params
  PlacementLoss verified_loss;          // brute-force re-evaluation
  int generations = 0;
  int evaluations = 0;
  int runs = 0;
};

// Initial layout: each sequence's middle-frame box center goes to the scene
// center, with yaw i * yaw_spread.
std::vector<PlacementParams> initialPlacement(const SceneLayout& layout, const std::vector<MotionVolume>& volumes,
                                              double yaw_spread);

// Minimizes the placement loss with CMA-ES. Success requires zero loss
// confirmed by the brute-force evaluation; otherwise the outcome is a
// failure report with the best loss found.
PlacementOutcome placeSequences(const SceneLayout& layout, const std::vector<MotionVolume>& volumes,
                                const PlacementOptions& options = PlacementOptions::defaults());

}  // namespace scanrig
