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
#include <string>
#include <utility>
#include <vector>

#include "body/body_model.hpp"
#include "fit/triangulate.hpp"
#include "geom/mesh.hpp"
#include "place/cameras.hpp"
#include "place/placement_loss.hpp"
#include "retarget/rigged_asset.hpp"

namespace scanrig {

struct SyntheticSubjectOptions {
  double shape_scale = 1.0;
  double swing_sigma = 0.2;   // radians, per axis perpendicular to the bone
  double twist_sigma = 0.05;  // radians, about the bone
  double inflation = 0.005;        // meters along vertex normals
  double pixel_noise = 1.0;        // keypoint noise sigma, pixels
  double camera_radius = 3.0;
  double camera_height = 1.5;
};

// Ground truth and observations for one synthetic subject.
struct SyntheticSubject {
  PoseParams theta;
  ShapeParams beta;
  PosedBody truth;  // uninflated posed body
  Mesh scan;        // inflated copy of truth.mesh
  std::vector<PinholeCamera> cameras;
  std::vector<Keypoints2D> keypoints;  // one per camera
};

// Normals averaged over vertices sharing a position, so that duplicated seam
// vertices move together.
Points weldedNormals(const Mesh& mesh);

Mesh inflateMesh(const Mesh& mesh, double distance);

// Random joint rotations (root excluded) split into swing and twist about
// each joint's rest bone direction, a random yaw about z and a small
// ground-plane translation.
PoseParams sampleSubjectPose(const ParametricBody& body, uint64_t seed, double swing_sigma, double twist_sigma);

SyntheticSubject makeSyntheticSubject(const ParametricBody& body, uint64_t seed,
                                      const SyntheticSubjectOptions& options = {});

std::vector<std::pair<CameraView, Keypoints2D>> keypointViews(const SyntheticSubject& subject);

struct WalkOptions {
  int frames = 60;
  double fps = 30.0;
  double speed = 1.2;         // meters per second along +y
  double stride_angle = 0.45; // peak hip swing, radians
  double phase = 0.0;         // radians
  double arm_drop_deg = 70.0; // shoulders lowered from the T-pose
};

// Procedural walk for a body using the demo joint names: legs and arms swing
// in opposition, knees flex, the root advances along +y with a small bob.
AnimationClip makeWalkingClip(const std::vector<std::string>& joint_names, const WalkOptions& options = {});

// 10 m x 10 m room, z up, with a table, a sofa and a shelf. The optional floor
// slab lies just below the bounds and only touches them.
SceneLayout demoRoom(bool with_floor = false);

}  // namespace scanrig
