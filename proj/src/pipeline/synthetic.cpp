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

#include "pipeline/synthetic.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "body/rotation.hpp"
#include "common/error.hpp"

namespace scanrig {

Points weldedNormals(const Mesh& mesh) {
  const Points raw = areaWeightedNormals(mesh);
  std::map<std::tuple<double, double, double>, Vec3> sums;
  for (int i = 0; i < mesh.numVertices(); ++i) {
    const Vec3& p = mesh.vertices[i];
    // Eigen vectors are not zero-initialized by operator[].
    sums.try_emplace({p.x(), p.y(), p.z()}, Vec3::Zero()).first->second += raw[i];
  }
  Points out(mesh.numVertices());
  for (int i = 0; i < mesh.numVertices(); ++i) {
    const Vec3& p = mesh.vertices[i];
    const Vec3& s = sums.at({p.x(), p.y(), p.z()});
    const double n = s.norm();
    out[i] = n > 0.0 ? Vec3(s / n) : Vec3::Zero();
  }
  return out;
}

Mesh inflateMesh(const Mesh& mesh, double distance) {
  const Points normals = weldedNormals(mesh);
  Mesh out = mesh;
  for (int i = 0; i < out.numVertices(); ++i) {
    out.vertices[i] += distance * normals[i];
  }
  out.normals.reset();
  return out;
}

PoseParams sampleSubjectPose(const ParametricBody& body, uint64_t seed, double swing_sigma, double twist_sigma) {
  const int nj = body.numJoints();
  const Points rest = body.joint_regressor.apply(body.rest_vertices);
  // Bone direction: towards the first child, or away from the parent for leaves.
  Points bone(nj, Vec3::UnitZ());
  std::vector<bool> has_child(nj, false);
  for (int j = nj - 1; j >= 1; --j) {
    const int p = body.parents[j];
    bone[p] = (rest[j] - rest[p]).normalized();
    has_child[p] = true;
  }
  for (int j = 1; j < nj; ++j) {
    if (!has_child[j]) bone[j] = (rest[j] - rest[body.parents[j]]).normalized();
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  PoseParams pose = PoseParams::identity(nj);
  for (int j = 1; j < nj; ++j) {
    const Vec3 axis = bone[j];
    const Vec3 e1 = axis.unitOrthogonal();
    const Vec3 e2 = axis.cross(e1);
    const double s1 = swing_sigma * normal(rng);
    const double s2 = swing_sigma * normal(rng);
    const double tw = twist_sigma * normal(rng);
    const Vec3 rv = s1 * e1 + s2 * e2 + tw * axis;
    const double angle = rv.norm();
    const Mat3 r = angle > 0.0 ? Mat3(Eigen::AngleAxisd(angle, rv / angle)) : Mat3::Identity();
    pose.joint_rotations[j] = matrixToRot6d(r);
  }
  const double yaw = std::numbers::pi * uniform(rng);
  pose.global_rotation = matrixToRot6d(Mat3(Eigen::AngleAxisd(yaw, Vec3::UnitZ())));
  pose.translation = Vec3(0.5 * uniform(rng), 0.5 * uniform(rng), 0.0);
  return pose;
}

SyntheticSubject makeSyntheticSubject(const ParametricBody& body, uint64_t seed,
                                      const SyntheticSubjectOptions& options) {
  SyntheticSubject s;
  s.theta = sampleSubjectPose(body, seed, options.swing_sigma, options.twist_sigma);
  s.beta = sampleShape(seed ^ 0x9e3779b97f4a7c15ULL, options.shape_scale, body.numShapes());
  s.truth = poseMesh(body, s.theta, s.beta);
  s.scan = inflateMesh(s.truth.mesh, options.inflation);

  const Vec3 target(s.theta.translation.x(), s.theta.translation.y(), 1.0);
  s.cameras = ringCameras(target, options.camera_radius, options.camera_height);
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> noise(0.0, options.pixel_noise);
  for (const PinholeCamera& cam : s.cameras) {
    const CameraView view = cam.view();
    Keypoints2D kp;
    for (const Vec3& j : s.truth.joints) {
      const Vec2 px = view.project(j);
      const double u = px.x() + noise(rng);
      const double v = px.y() + noise(rng);
      kp.points.emplace_back(u, v, 1.0);
    }
    s.keypoints.push_back(std::move(kp));
  }
  return s;
}

std::vector<std::pair<CameraView, Keypoints2D>> keypointViews(const SyntheticSubject& subject) {
  std::vector<std::pair<CameraView, Keypoints2D>> out;
  for (size_t i = 0; i < subject.cameras.size(); ++i) {
    out.emplace_back(subject.cameras[i].view(), subject.keypoints[i]);
  }
  return out;
}

static int jointIndex(const std::vector<std::string>& names, const std::string& name) {
  for (size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) {
      return static_cast<int>(j);
    }
  }
  throwInvalid("walking clip: body has no joint named '" + name + "'");
}

AnimationClip makeWalkingClip(const std::vector<std::string>& joint_names, const WalkOptions& options) {
  if (options.frames <= 0 || !(options.fps > 0.0)) {
    throwInvalid("walking clip: frames and fps must be positive");
  }
  const int l_hip = jointIndex(joint_names, "left_hip");
  const int r_hip = jointIndex(joint_names, "right_hip");
  const int l_knee = jointIndex(joint_names, "left_knee");
  const int r_knee = jointIndex(joint_names, "right_knee");
  const int l_shoulder = jointIndex(joint_names, "left_shoulder");
  const int r_shoulder = jointIndex(joint_names, "right_shoulder");
  const int l_elbow = jointIndex(joint_names, "left_elbow");
  const int r_elbow = jointIndex(joint_names, "right_elbow");

  const double drop = options.arm_drop_deg * std::numbers::pi / 180.0;
  const Mat3 l_down = Eigen::AngleAxisd(drop, Vec3::UnitY()).toRotationMatrix();
  const Mat3 r_down = Eigen::AngleAxisd(-drop, Vec3::UnitY()).toRotationMatrix();
  auto about_x = [](double a) { return Mat3(Eigen::AngleAxisd(a, Vec3::UnitX())); };
  // One full gait cycle per 1.1 m travelled.
  const double cadence = 2.0 * std::numbers::pi * options.speed / 1.1;

  AnimationClip clip;
  clip.fps = options.fps;
  const int nj = static_cast<int>(joint_names.size());
  for (int f = 0; f < options.frames; ++f) {
    const double t = f / options.fps;
    const double c = cadence * t + options.phase;
    const double swing = options.stride_angle * std::sin(c);
    ClipFrame frame = identityFrame(nj);
    frame.root_translation = Vec3(0.0, options.speed * t, 0.01 * std::cos(2.0 * c));
    frame.joint_rotations[l_hip] = matrixToRot6d(about_x(swing));
    frame.joint_rotations[r_hip] = matrixToRot6d(about_x(-swing));
    frame.joint_rotations[l_knee] = matrixToRot6d(about_x(-0.6 * std::max(0.0, std::sin(c + 1.2))));
    frame.joint_rotations[r_knee] = matrixToRot6d(about_x(-0.6 * std::max(0.0, -std::sin(c + 1.2))));
    frame.joint_rotations[l_shoulder] = matrixToRot6d(about_x(-0.6 * swing) * l_down);
    frame.joint_rotations[r_shoulder] = matrixToRot6d(about_x(0.6 * swing) * r_down);
    frame.joint_rotations[l_elbow] = matrixToRot6d(about_x(0.25));
    frame.joint_rotations[r_elbow] = matrixToRot6d(about_x(0.25));
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

SceneLayout demoRoom(bool with_floor) {
  SceneLayout room;
  room.up_axis = 2;
  room.bounds.min = Vec3(0.0, 0.0, -0.1);
  room.bounds.max = Vec3(10.0, 10.0, 3.0);
  auto box = [](Vec3 lo, Vec3 hi) {
    Aabb b;
    b.min = lo;
    b.max = hi;
    return b;
  };
  room.obstacles.push_back(box({2.0, 6.0, 0.0}, {3.2, 7.0, 0.75}));   // table
  room.obstacles.push_back(box({6.5, 1.0, 0.0}, {8.5, 2.0, 0.9}));    // sofa
  room.obstacles.push_back(box({0.0, 3.0, 0.0}, {0.5, 5.0, 2.0}));    // shelf
  if (with_floor) {
    room.obstacles.push_back(box({0.0, 0.0, -0.3}, {10.0, 10.0, -0.1}));
  }
  room.validate();
  return room;
}

}  // namespace scanrig
