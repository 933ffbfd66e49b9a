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
#include <vector>

#include "common/sparse.hpp"
#include "common/types.hpp"
#include "geom/mesh.hpp"

namespace scanrig {

// Latent shape coefficients (unitless), one per blendshape.
struct ShapeParams {
  VecX beta;

  static ShapeParams zero(int num_shapes) { return {VecX::Zero(num_shapes)}; }
};

// Global rigid placement plus one local 6D rotation per joint. The global
// rotation acts about the world origin after skinning.
struct PoseParams {
  Rot6 global_rotation;
  Vec3 translation = Vec3::Zero();
  std::vector<Rot6> joint_rotations;

  static PoseParams identity(int num_joints);
  bool allFinite() const;
};

// Linear-blendshape, linear-blend-skinned articulated body.
//   rest_vertices   N x 3, meters
//   blendshapes     S x N x 3, meters per unit beta
//   parents         J entries, parents[root] = -1, exactly one root
//   joint_regressor J rows over N vertices, nonnegative, rows sum to 1
//   skin_weights    N rows over J joints, nonnegative, rows sum to 1
struct ParametricBody {
  Points rest_vertices;
  std::vector<Face> faces;
  std::vector<Vec2> uvs;
  std::vector<Points> blendshapes;
  std::vector<int> parents;
  SparseRows joint_regressor;
  SparseRows skin_weights;
  std::vector<std::string> joint_names;

  int numVertices() const { return static_cast<int>(rest_vertices.size()); }
  int numJoints() const { return static_cast<int>(parents.size()); }
  int numShapes() const { return static_cast<int>(blendshapes.size()); }

  // Rest mesh with UVs, body faces.
  Mesh restMesh() const;
};

// Throws kInvalidInput describing the first violated invariant.
void validateBody(const ParametricBody& body, int max_influences = 4);

// Parents-before-children ordering of a rooted tree; throws if `parents`
// has no single root, a cycle, or an out-of-range entry.
std::vector<int> topologicalOrder(const std::vector<int>& parents);

// rest_vertices + sum_s beta_s * blendshape_s
Points shapeMesh(const ParametricBody& body, const ShapeParams& shape);

// Per-joint world transforms from forward kinematics, before the global
// rotation/translation is applied.
struct SkeletonState {
  std::vector<Mat3> local;
  std::vector<Mat3> world_rotation;
  Points world_position;  // posed joint centers
  // Skinning transform for joint j: x -> world_rotation[j] * x + offset[j].
  Points offset;
};

SkeletonState forwardKinematics(const std::vector<int>& parents, const std::vector<int>& order,
                                const Points& rest_joints, const std::vector<Rot6>& joint_rotations);

// Skins `rest_vertices` with the state and applies the global transform.
Points skinVertices(const Points& rest_vertices, const SparseRows& weights, const SkeletonState& state,
                    const Mat3& global_rotation, const Vec3& translation);

struct PosedBody {
  Mesh mesh;      // body faces and UVs
  Points joints;  // J x 3, world space
};

PosedBody poseMesh(const ParametricBody& body, const PoseParams& pose, const ShapeParams& shape);
Points modelJoints(const ParametricBody& body, const PoseParams& pose, const ShapeParams& shape);

// Deterministic N(0, scale^2) coefficients from `seed`.
ShapeParams sampleShape(uint64_t seed, double scale, int num_shapes);

// Everything the reverse pass needs from one forward evaluation.
struct BodyEvaluation {
  Points shaped;      // rest vertices after blendshapes
  Points rest_joints;
  SkeletonState state;
  Mat3 global_rotation;
  Points skinned;     // before the global transform
  Points vertices;    // final world positions
  Points joints;      // final world joint positions
};

struct BodyGradient {
  Rot6 global_rotation = Rot6::Zero();
  Vec3 translation = Vec3::Zero();
  std::vector<Rot6> joint_rotations;
  VecX beta;
};

BodyEvaluation evaluateBody(const ParametricBody& body, const std::vector<int>& order, const PoseParams& pose,
                            const ShapeParams& shape, bool with_vertices = true);

// Reverse-mode gradient given dL/dvertices (empty to skip) and dL/djoints
// (empty to skip).
BodyGradient backpropagateBody(const ParametricBody& body, const std::vector<int>& order, const PoseParams& pose,
                               const BodyEvaluation& eval, const Points& grad_vertices, const Points& grad_joints);

}  // namespace scanrig
