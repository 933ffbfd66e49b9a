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

#include "retarget/rigged_asset.hpp"

#include "body/rotation.hpp"
#include "common/error.hpp"

namespace scanrig {

void RiggedAsset::validate() const {
  if (skin_weights.rows() != rest_mesh.numVertices()) {
    throwInvalid("asset skin weights do not match the rest mesh vertex count");
  }
  if (skin_weights.cols() != numJoints() || static_cast<int>(rest_joints.size()) != numJoints()) {
    throwInvalid("asset skeleton sizes disagree");
  }
  if (!joint_names.empty() && static_cast<int>(joint_names.size()) != numJoints()) {
    throwInvalid("asset joint names do not match the skeleton");
  }
  if (!skin_weights.allNonNegative() || skin_weights.maxRowSumError() > 1e-6) {
    throwInvalid("asset skin weights must be nonnegative with rows summing to 1");
  }
  topologicalOrder(parents);
}

ClipFrame identityFrame(int num_joints) {
  ClipFrame f;
  f.joint_rotations.assign(num_joints, identityRot6d());
  f.global_rotation = identityRot6d();
  return f;
}

RiggedAsset makeRestAsset(const Mesh& scan, const ParametricBody& body, const PoseParams& theta_fit,
                          const ShapeParams& beta_fit, const ShapeParams& beta_new) {
  const PosedBody fitted = poseMesh(body, theta_fit, beta_fit);
  const DisplacementField field = bindField(scan, fitted.mesh);
  const PoseParams rest_pose = PoseParams::identity(body.numJoints());
  const PosedBody target = poseMesh(body, rest_pose, beta_new);

  RiggedAsset asset;
  asset.rest_mesh.vertices = applyField(field, target.mesh);
  asset.rest_mesh.faces = scan.faces;
  asset.rest_mesh.uvs = scan.uvs;
  asset.skin_weights = transferSkinning(field, body.skin_weights);
  asset.parents = body.parents;
  asset.joint_names = body.joint_names;
  asset.rest_joints = target.joints;
  asset.shape_tag = beta_new;
  asset.validate();
  return asset;
}

Mesh poseAsset(const RiggedAsset& asset, const ClipFrame& frame) {
  if (static_cast<int>(frame.joint_rotations.size()) != asset.numJoints()) {
    throwInvalid("clip frame has " + std::to_string(frame.joint_rotations.size()) + " joints, asset has " +
                 std::to_string(asset.numJoints()));
  }
  const std::vector<int> order = topologicalOrder(asset.parents);
  const SkeletonState state = forwardKinematics(asset.parents, order, asset.rest_joints, frame.joint_rotations);
  Mesh out;
  out.vertices = skinVertices(asset.rest_mesh.vertices, asset.skin_weights, state,
                              rot6dToMatrix(frame.global_rotation), frame.root_translation);
  out.faces = asset.rest_mesh.faces;
  out.uvs = asset.rest_mesh.uvs;
  return out;
}

Points poseAssetJoints(const RiggedAsset& asset, const ClipFrame& frame) {
  if (static_cast<int>(frame.joint_rotations.size()) != asset.numJoints()) {
    throwInvalid("clip frame has " + std::to_string(frame.joint_rotations.size()) + " joints, asset has " +
                 std::to_string(asset.numJoints()));
  }
  const std::vector<int> order = topologicalOrder(asset.parents);
  const SkeletonState state = forwardKinematics(asset.parents, order, asset.rest_joints, frame.joint_rotations);
  const Mat3 global = rot6dToMatrix(frame.global_rotation);
  Points out(state.world_position.size());
  for (size_t j = 0; j < out.size(); ++j) {
    out[j] = global * state.world_position[j] + frame.root_translation;
  }
  return out;
}

std::vector<Mesh> animateAsset(const RiggedAsset& asset, const AnimationClip& clip) {
  std::vector<Mesh> out;
  out.reserve(clip.frames.size());
  for (const ClipFrame& f : clip.frames) {
    out.push_back(poseAsset(asset, f));
  }
  return out;
}

}  // namespace scanrig
