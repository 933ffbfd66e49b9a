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
#include <span>
#include <vector>

#include "body/body_model.hpp"
#include "fit/fit_config.hpp"
#include "geom/bvh.hpp"

namespace scanrig {

// Mean Euclidean distance over valid joints. Throws if none is valid.
// When `grad` is non-null it receives dL/dJ_t (zero for invalid joints).
double jointLoss(std::span<const Vec3> fitted, std::span<const Vec3> target, const std::vector<bool>& valid,
                 Points* grad = nullptr);

struct IcpLoss {
  double value = 0.0;
  int inside = 0;
  int outside = 0;
};

// Inside/outside weighted sum of closest distances from each vertex to the
// scan surface. `scan_bvh` must index `scan`.
IcpLoss icpLoss(std::span<const Vec3> vertices, const TriangleBvh& scan_bvh, const Mesh& scan, const FitConfig& cfg);

// Closest targets and per-vertex weights, held fixed during an outer step.
struct Correspondences {
  Points targets;
  std::vector<double> weights;
  std::vector<bool> inside;
  int num_inside = 0;
  int num_outside = 0;
};

Correspondences computeCorrespondences(std::span<const Vec3> vertices, const TriangleBvh& scan_bvh, const Mesh& scan,
                                       const FitConfig& cfg);

// sum_i w_i * |v_i - target_i|. The gradient at a coincident point is taken
// as zero.
double frozenMeshLoss(std::span<const Vec3> vertices, const Correspondences& corr, Points* grad = nullptr);

struct PriorLoss {
  double pose = 0.0;   // sum_j |theta_j - identity|^2
  double shape = 0.0;  // |beta|^2
  double total() const { return pose + shape; }
};

// Global rotation and translation are not penalized.
PriorLoss priorLoss(const PoseParams& pose, const ShapeParams& shape);

}  // namespace scanrig
