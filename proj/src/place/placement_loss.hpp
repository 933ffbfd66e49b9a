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

#include <span>
#include <vector>

#include "geom/mesh.hpp"
#include "place/motion_volume.hpp"

namespace scanrig {

struct SceneLayout {
  Aabb bounds;
  std::vector<Aabb> obstacles;
  int up_axis = 2;  // 0 = x, 1 = y, 2 = z

  // Throws on a degenerate or non-finite layout.
  void validate() const;
  // The two ground-plane axes, in right-handed order around up_axis.
  int groundAxis0() const { return (up_axis + 1) % 3; }
  int groundAxis1() const { return (up_axis + 2) % 3; }
};

struct PlacementParams {
  Vec2 translation = Vec2::Zero();  // along groundAxis0, groundAxis1
  double yaw = 0.0;                 // radians about up_axis
};

struct PlacementLoss {
  int collisions = 0;
  int out_of_bounds = 0;
  int total() const { return collisions + out_of_bounds; }
  bool operator==(const PlacementLoss&) const = default;
};

// Box of `local` after yaw about the up axis through the local origin,
// re-tightened to an axis-aligned box, then translated in the ground plane.
// cos/sin with magnitude below 1e-15 are snapped to 0.
Aabb placeBox(const Aabb& local, const PlacementParams& params, int up_axis);

// The same rigid motion applied to a single point.
Vec3 placePoint(const Vec3& p, const PlacementParams& params, int up_axis);

// Strict overlap on all three axes; touching boxes do not collide.
bool boxesOverlap(const Aabb& a, const Aabb& b);
// Inclusive containment.
bool boxInside(const Aabb& inner, const Aabb& outer);

// Person-person collisions per (pair, timestep) while both are present,
// person-obstacle collisions per (person, obstacle, timestep), and one
// out-of-bounds count per (person, timestep) not fully inside the scene.
PlacementLoss placementLoss(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                            std::span<const PlacementParams> params);

// Independent evaluation for verification: transforms all 8 corners with a
// full rotation matrix and loops over every timestep and pair.
PlacementLoss bruteForcePlacementLoss(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                                      std::span<const PlacementParams> params);

// Discrete alternative: boxes are rasterized to a grid of cell size
// `resolution` and two people collide at a timestep when they share a cell.
// Obstacles and bounds are checked as in placementLoss.
PlacementLoss voxelPlacementLoss(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                                 std::span<const PlacementParams> params, double resolution = 0.25);

}  // namespace scanrig
