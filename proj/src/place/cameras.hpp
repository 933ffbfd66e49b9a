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

#include <vector>

#include "common/types.hpp"
#include "fit/triangulate.hpp"

namespace scanrig {

// Calibrated pinhole camera: pixel ~ K (R x + t). R rows are the camera
// right, down and forward axes in world coordinates.
struct PinholeCamera {
  Mat3 intrinsics = Mat3::Identity();
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  int width = 0;
  int height = 0;

  Mat34 projection() const;
  CameraView view() const { return {projection()}; }
  Vec3 center() const { return -rotation.transpose() * translation; }
};

// Camera at `eye` looking at `target`; `up` must not be parallel to the
// viewing direction. Horizontal field of view in degrees.
PinholeCamera lookAtCamera(const Vec3& eye, const Vec3& target, const Vec3& up, double horizontal_fov_deg, int width,
                           int height);

struct CameraRigOptions {
  double horizontal_fov_deg = 60.0;
  int width = 1920;
  int height = 1080;
  double aim_height = 1.0;
};

// Four cameras at the corners of the square of half-size `half_extent`
// around `center` (in the ground plane, z up), at the given heights, aimed
// at the center raised to aim_height.
std::vector<PinholeCamera> cornerCameras(const Vec2& center, double half_extent, const std::vector<double>& heights,
                                         const CameraRigOptions& options = {});

// Four cameras on a circle of `radius` around `target`, 45 degrees apart
// from the axes, at `height`.
std::vector<PinholeCamera> ringCameras(const Vec3& target, double radius, double height,
                                       const CameraRigOptions& options = {});

}  // namespace scanrig
