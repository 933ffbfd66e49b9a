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

#include "place/cameras.hpp"

#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace scanrig {

Mat34 PinholeCamera::projection() const {
  Mat34 rt;
  rt.leftCols<3>() = rotation;
  rt.col(3) = translation;
  return intrinsics * rt;
}

PinholeCamera lookAtCamera(const Vec3& eye, const Vec3& target, const Vec3& up, double horizontal_fov_deg, int width,
                           int height) {
  if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0) || width <= 0 || height <= 0) {
    throwInvalid("camera needs a field of view in (0, 180) degrees and a positive image size");
  }
  const Vec3 forward_raw = target - eye;
  if (forward_raw.norm() < 1e-12) {
    throwInvalid("camera eye and target coincide");
  }
  const Vec3 forward = forward_raw.normalized();
  const Vec3 right_raw = forward.cross(up);
  if (right_raw.norm() < 1e-9) {
    throwInvalid("camera up vector is parallel to the viewing direction");
  }
  const Vec3 right = right_raw.normalized();
  const Vec3 down = forward.cross(right);

  PinholeCamera cam;
  cam.width = width;
  cam.height = height;
  cam.rotation.row(0) = right.transpose();
  cam.rotation.row(1) = down.transpose();
  cam.rotation.row(2) = forward.transpose();
  cam.translation = -cam.rotation * eye;
  const double f = 0.5 * width / std::tan(0.5 * horizontal_fov_deg * std::numbers::pi / 180.0);
  cam.intrinsics << f, 0.0, 0.5 * width, 0.0, f, 0.5 * height, 0.0, 0.0, 1.0;
  return cam;
}

std::vector<PinholeCamera> cornerCameras(const Vec2& center, double half_extent, const std::vector<double>& heights,
                                         const CameraRigOptions& options) {
  if (heights.size() != 4) {
    throwInvalid("corner cameras need exactly 4 heights");
  }
  const Vec3 target(center.x(), center.y(), options.aim_height);
  const double sx[4] = {-1.0, 1.0, 1.0, -1.0};
  const double sy[4] = {-1.0, -1.0, 1.0, 1.0};
  std::vector<PinholeCamera> out;
  for (int i = 0; i < 4; ++i) {
    const Vec3 eye(center.x() + sx[i] * half_extent, center.y() + sy[i] * half_extent, heights[i]);
    out.push_back(lookAtCamera(eye, target, Vec3::UnitZ(), options.horizontal_fov_deg, options.width,
                               options.height));
  }
  return out;
}

std::vector<PinholeCamera> ringCameras(const Vec3& target, double radius, double height,
                                       const CameraRigOptions& options) {
  std::vector<PinholeCamera> out;
  for (int i = 0; i < 4; ++i) {
    const double a = std::numbers::pi * (0.25 + 0.5 * i);
    const Vec3 eye(target.x() + radius * std::cos(a), target.y() + radius * std::sin(a), height);
    out.push_back(lookAtCamera(eye, target, Vec3::UnitZ(), options.horizontal_fov_deg, options.width,
                               options.height));
  }
  return out;
}

}  // namespace scanrig
