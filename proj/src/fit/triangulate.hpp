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
#include <utility>
#include <vector>

#include "common/types.hpp"

namespace scanrig {

// Pinhole camera as a 3x4 projection from homogeneous world points to
// homogeneous pixels.
struct CameraView {
  Mat34 projection = Mat34::Zero();

  // Throws if the left 3x3 block is singular.
  void validate() const;
  Vec3 center() const;
  // Pixel coordinates; w must be nonzero.
  Vec2 project(const Vec3& point) const;
  // Camera-space depth sign: true if the point is in front of the camera.
  bool inFront(const Vec3& point) const;
};

// One (u, v, confidence) per model joint; confidence 0 marks a missing joint.
struct Keypoints2D {
  std::vector<Vec3> points;
};

struct TriangulatedSkeleton {
  Points joints;
  std::vector<bool> valid;
  std::vector<double> reprojection_rms;  // pixels, NaN for invalid joints
  std::vector<std::string> diagnostics;  // empty when valid

  int numValid() const;
};

// Per-joint confidence-weighted DLT. A joint needs at least two views with
// confidence > 0 and a non-degenerate baseline; otherwise it is marked
// invalid with a diagnostic.
TriangulatedSkeleton triangulateKeypoints(const std::vector<std::pair<CameraView, Keypoints2D>>& views);

// Solves a single point from the observing views (exposed for tests).
Vec3 triangulatePoint(const std::vector<CameraView>& cameras, const std::vector<Vec2>& pixels,
                      const std::vector<double>& weights);

}  // namespace scanrig
