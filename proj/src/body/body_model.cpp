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

#include "body/body_model.hpp"

#include <cmath>
#include <random>

#include "body/rotation.hpp"
#include "common/error.hpp"

namespace scanrig {

PoseParams PoseParams::identity(int num_joints) {
  PoseParams p;
  p.global_rotation = identityRot6d();
  p.translation.setZero();
  p.joint_rotations.assign(num_joints, identityRot6d());
  return p;
}

bool PoseParams::allFinite() const {
  if (!global_rotation.allFinite() || !translation.allFinite()) {
    return false;
  }
  for (const auto& r : joint_rotations) {
    if (!r.allFinite()) {
      return false;
    }
  }
  return true;
}

Mesh ParametricBody::restMesh() const {
  Mesh m;
  m.vertices = rest_vertices;
  m.faces = faces;
  m.uvs = uvs;
  return m;
}

std::vector<int> topologicalOrder(const std::vector<int>& parents) {
  const int n = static_cast<int>(parents.size());
  if (n == 0) {
    throwInvalid("skeleton has no joints");
  }
  std::vector<std::vector<int>> children(n);
  int root = -1;
  for (int j = 0; j < n; ++j) {
    const int p = parents[j];
    if (p < 0) {
      if (root >= 0) {
        throwInvalid("skeleton has more than one root (joints " + std::to_string(root) + " and " +
                     std::to_string(j) + ")");
      }
      root = j;
    } else if (p >= n) {
      throwInvalid("joint " + std::to_string(j) + " has out-of-range parent " + std::to_string(p));
    } else {
      children[p].push_back(j);
    }
  }
  if (root < 0) {
    throwInvalid("skeleton has no root joint");
  }
  std::vector<int> order;
  order.reserve(n);
  order.push_back(root);
  for (size_t k = 0; k < order.size(); ++k) {
    for (int c : children[order[k]]) {
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throwInvalid("skeleton parent array contains a cycle");
  }
  return order;
}

void validateBody(const ParametricBody& body, int max_influences) {
  const int n = body.numVertices();
  const int nj = body.numJoints();
  if (n == 0 || body.faces.empty()) {
    throwInvalid("body model has no geometry");
  }
  validateMesh(body.restMesh());
  if (static_cast<int>(body.uvs.size()) != n) {
    throwInvalid("body model needs one uv per vertex");
  }
  for (int s = 0; s < body.numShapes(); ++s) {
    if (static_cast<int>(body.blendshapes[s].size()) != n) {
      throwInvalid("blendshape " + std::to_string(s) + " has the wrong vertex count");
    }
  }
  topologicalOrder(body.parents);
  if (body.joint_regressor.rows() != nj || body.joint_regressor.cols() != n) {
    throwInvalid("joint regressor must be J x N");
  }
  if (!body.joint_regressor.allNonNegative() || body.joint_regressor.maxRowSumError() > 1e-6) {
    throwInvalid("joint regressor rows must be nonnegative and sum to 1");
  }
  if (body.skin_weights.rows() != n || body.skin_weights.cols() != nj) {
    throwInvalid("skin weights must be N x J");
  }
  if (!body.skin_weights.allNonNegative() || body.skin_weights.maxRowSumError() > 1e-6) {
    throwInvalid("skin weight rows must be nonnegative and sum to 1");
  }
  if (static_cast<int>(body.skin_weights.maxRowNonZeros()) > max_influences) {
    throwInvalid("a vertex has more than " + std::to_string(max_influences) + " skinning influences");
  }
  if (!body.joint_names.empty() && static_cast<int>(body.joint_names.size()) != nj) {
    throwInvalid("joint name count does not match joint count");
  }
}

Points shapeMesh(const ParametricBody& body, const ShapeParams& shape) {
  if (shape.beta.size() != body.numShapes()) {
    throwInvalid("shape vector has " + std::to_string(shape.beta.size()) + " entries, body expects " +
                 std::to_string(body.numShapes()));
  }
  Points v = body.rest_vertices;
  for (int s = 0; s < body.numShapes(); ++s) {
    const double b = shape.beta[s];
    if (b == 0.0) {
      continue;
    }
    const Points& bs = body.blendshapes[s];
    for (size_t i = 0; i < v.size(); ++i) {
      v[i] += b * bs[i];
    }
  }
  return v;
}

SkeletonState forwardKinematics(const std::vector<int>& parents, const std::vector<int>& order,
                                const Points& rest_joints, const std::vector<Rot6>& joint_rotations) {
  const size_t n = parents.size();
  if (joint_rotations.size() != n || rest_joints.size() != n) {
    throwInvalid("pose has " + std::to_string(joint_rotations.size()) + " joint rotations, skeleton has " +
                 std::to_string(n) + " joints");
  }
  SkeletonState s;
  s.local.resize(n);
  s.world_rotation.resize(n);
  s.world_position.resize(n);
  s.offset.resize(n);
  for (int j : order) {
    s.local[j] = rot6dToMatrix(joint_rotations[j]);
    const int p = parents[j];
    if (p < 0) {
      s.world_rotation[j] = s.local[j];
      s.world_position[j] = rest_joints[j];
    } else {
      s.world_rotation[j] = s.world_rotation[p] * s.local[j];
      s.world_position[j] = s.world_rotation[p] * (rest_joints[j] - rest_joints[p]) + s.world_position[p];
    }
    s.offset[j] = s.world_position[j] - s.world_rotation[j] * rest_joints[j];
  }
  return s;
}

namespace {

Points skinLocal(const Points& rest_vertices, const SparseRows& weights, const SkeletonState& state) {
  if (weights.rows() != static_cast<int>(rest_vertices.size())) {
    throwInvalid("skin weight rows do not match vertex count");
  }
  Points out(rest_vertices.size());
  for (size_t i = 0; i < rest_vertices.size(); ++i) {
    Vec3 acc = Vec3::Zero();
    for (const auto& e : weights.row(static_cast<int>(i))) {
      acc += e.value * (state.world_rotation[e.col] * rest_vertices[i] + state.offset[e.col]);
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

Points skinVertices(const Points& rest_vertices, const SparseRows& weights, const SkeletonState& state,
                    const Mat3& global_rotation, const Vec3& translation) {
  Points out = skinLocal(rest_vertices, weights, state);
  for (auto& v : out) {
    v = global_rotation * v + translation;
  }
  return out;
}

BodyEvaluation evaluateBody(const ParametricBody& body, const std::vector<int>& order, const PoseParams& pose,
                            const ShapeParams& shape, bool with_vertices) {
  BodyEvaluation e;
  e.shaped = shapeMesh(body, shape);
  e.rest_joints = body.joint_regressor.apply(e.shaped);
  e.state = forwardKinematics(body.parents, order, e.rest_joints, pose.joint_rotations);
  e.global_rotation = rot6dToMatrix(pose.global_rotation);
  e.joints.resize(e.rest_joints.size());
  for (size_t j = 0; j < e.joints.size(); ++j) {
    e.joints[j] = e.global_rotation * e.state.world_position[j] + pose.translation;
  }
  if (with_vertices) {
    e.skinned = skinLocal(e.shaped, body.skin_weights, e.state);
    e.vertices.resize(e.skinned.size());
    for (size_t i = 0; i < e.skinned.size(); ++i) {
      e.vertices[i] = e.global_rotation * e.skinned[i] + pose.translation;
    }
  }
  return e;
}

BodyGradient backpropagateBody(const ParametricBody& body, const std::vector<int>& order, const PoseParams& pose,
                               const BodyEvaluation& eval, const Points& grad_vertices, const Points& grad_joints) {
  const int nj = body.numJoints();
  const int nv = body.numVertices();
  const Mat3& rg = eval.global_rotation;
  const SkeletonState& st = eval.state;

  BodyGradient g;
  g.joint_rotations.assign(nj, Rot6::Zero());
  g.beta = VecX::Zero(body.numShapes());

  Mat3 g_global = Mat3::Zero();
  std::vector<Mat3> g_world_rot(nj, Mat3::Zero());
  Points g_world_pos(nj, Vec3::Zero());
  Points g_rest_joints(nj, Vec3::Zero());
  Points g_shaped(nv, Vec3::Zero());

  if (!grad_joints.empty()) {
    for (int j = 0; j < nj; ++j) {
      g.translation += grad_joints[j];
      g_global += grad_joints[j] * st.world_position[j].transpose();
      g_world_pos[j] += rg.transpose() * grad_joints[j];
    }
  }
  if (!grad_vertices.empty()) {
    std::vector<Vec3> g_offset(nj, Vec3::Zero());
    for (int i = 0; i < nv; ++i) {
      const Vec3& gv = grad_vertices[i];
      if (gv.isZero(0.0)) {
        continue;
      }
      g.translation += gv;
      g_global += gv * eval.skinned[i].transpose();
      const Vec3 gs = rg.transpose() * gv;
      const Vec3& x = eval.shaped[i];
      for (const auto& e : body.skin_weights.row(i)) {
        const Vec3 wg = e.value * gs;
        g_world_rot[e.col] += wg * x.transpose();
        g_offset[e.col] += wg;
        g_shaped[i] += st.world_rotation[e.col].transpose() * wg;
      }
    }
    // offset_j = P_j - Rw_j * J_j
    for (int j = 0; j < nj; ++j) {
      g_world_pos[j] += g_offset[j];
      g_world_rot[j] -= g_offset[j] * eval.rest_joints[j].transpose();
      g_rest_joints[j] -= st.world_rotation[j].transpose() * g_offset[j];
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int j = *it;
    const int p = body.parents[j];
    Mat3 g_local;
    if (p < 0) {
      g_local = g_world_rot[j];
      g_rest_joints[j] += g_world_pos[j];
    } else {
      const Mat3& rp = st.world_rotation[p];
      g_local = rp.transpose() * g_world_rot[j];
      g_world_rot[p] += g_world_rot[j] * st.local[j].transpose() +
                        g_world_pos[j] * (eval.rest_joints[j] - eval.rest_joints[p]).transpose();
      const Vec3 back = rp.transpose() * g_world_pos[j];
      g_rest_joints[j] += back;
      g_rest_joints[p] -= back;
      g_world_pos[p] += g_world_pos[j];
    }
    g.joint_rotations[j] = rot6dBackward(pose.joint_rotations[j], g_local);
  }
  g.global_rotation = rot6dBackward(pose.global_rotation, g_global);

  for (int j = 0; j < nj; ++j) {
    for (const auto& e : body.joint_regressor.row(j)) {
      g_shaped[e.col] += e.value * g_rest_joints[j];
    }
  }
  for (int s = 0; s < body.numShapes(); ++s) {
    double acc = 0.0;
    const Points& bs = body.blendshapes[s];
    for (int i = 0; i < nv; ++i) {
      acc += bs[i].dot(g_shaped[i]);
    }
    g.beta[s] = acc;
  }
  return g;
}

PosedBody poseMesh(const ParametricBody& body, const PoseParams& pose, const ShapeParams& shape) {
  const std::vector<int> order = topologicalOrder(body.parents);
  BodyEvaluation e = evaluateBody(body, order, pose, shape, true);
  PosedBody out;
  out.mesh.vertices = std::move(e.vertices);
  out.mesh.faces = body.faces;
  out.mesh.uvs = body.uvs;
  out.joints = std::move(e.joints);
  return out;
}

Points modelJoints(const ParametricBody& body, const PoseParams& pose, const ShapeParams& shape) {
  const std::vector<int> order = topologicalOrder(body.parents);
  return evaluateBody(body, order, pose, shape, false).joints;
}

ShapeParams sampleShape(uint64_t seed, double scale, int num_shapes) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throwInvalid("shape sampling scale must be a finite nonnegative number");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ShapeParams s = ShapeParams::zero(num_shapes);
  for (int k = 0; k < num_shapes; ++k) {
    s.beta[k] = scale * normal(rng);
  }
  return s;
}

}  // namespace scanrig
