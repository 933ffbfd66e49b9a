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
#include <vector>

#include "body/body_model.hpp"
#include "body/rotation.hpp"
#include "common/sparse.hpp"
#include "geom/mesh.hpp"
#include "retarget/displacement_field.hpp"

namespace scanrig {

// Animation-ready scan: rest mesh, per-vertex skin weights and skeleton.
struct RiggedAsset {
  Mesh rest_mesh;
  SparseRows skin_weights{0};  // N_s x J
  std::vector<int> parents;
  std::vector<std::string> joint_names;
  Points rest_joints;
  ShapeParams shape_tag;

  int numJoints() const { return static_cast<int>(parents.size()); }
  // Throws kInvalidInput when weights are not row-stochastic within 1e-6 or
  // sizes disagree.
  void validate() const;
};

struct ClipFrame {
  std::vector<Rot6> joint_rotations;
  Vec3 root_translation = Vec3::Zero();
  Rot6 global_rotation = identityRot6d();  // about the world origin, before translation
};

struct AnimationClip {
  double fps = 30.0;
  std::vector<ClipFrame> frames;
};

ClipFrame identityFrame(int num_joints);

// Binds the scan to the fitted body, carries it to the identity pose with
// shape `beta_new`, and transfers the body's skin weights.
RiggedAsset makeRestAsset(const Mesh& scan, const ParametricBody& body, const PoseParams& theta_fit,
                          const ShapeParams& beta_fit, const ShapeParams& beta_new);

Mesh poseAsset(const RiggedAsset& asset, const ClipFrame& frame);

// World-space joint centers for one frame.
Points poseAssetJoints(const RiggedAsset& asset, const ClipFrame& frame);

// One mesh per clip frame. Throws if the clip's joint count differs.
std::vector<Mesh> animateAsset(const RiggedAsset& asset, const AnimationClip& clip);

}  // namespace scanrig
