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

#include <optional>
#include <vector>

#include "body/body_model.hpp"
#include "fit/fit_config.hpp"
#include "fit/losses.hpp"

namespace scanrig {

// Packs pose and shape as [global 6D, translation, joints 6D..., beta].
class ParamLayout {
 public:
  ParamLayout(int num_joints, int num_shapes) : num_joints_(num_joints), num_shapes_(num_shapes) {}

  int size() const { return 9 + 6 * num_joints_ + num_shapes_; }
  int translationOffset() const { return 6; }
  int jointOffset(int j) const { return 9 + 6 * j; }
  int shapeOffset() const { return 9 + 6 * num_joints_; }

  VecX pack(const PoseParams& pose, const ShapeParams& shape) const;
  void unpack(const VecX& x, PoseParams& pose, ShapeParams& shape) const;

 private:
  int num_joints_;
  int num_shapes_;
};

// Jacobian of a set of 3D points with respect to the packed parameters,
// stored as dense blocks over points that share a column pattern.
struct PointJacobian {
  struct Block {
    std::vector<int> points;
    std::vector<int> cols;
    Eigen::MatrixXd values;  // 3 rows per point
  };
  int num_points = 0;
  int num_params = 0;
  std::vector<Block> blocks;

  // sum_i w_i J_i^T J_i for per-point weights w.
  Eigen::MatrixXd weightedGram(const VecX& point_weights) const;
};

// Fitting objective as a function of the packed parameter vector.
class FitObjective {
 public:
  struct Terms {
    bool joints = true;
    bool mesh = false;  // requires correspondences
    bool prior = true;
  };

  struct Breakdown {
    double joint = 0.0;  // unweighted
    double mesh = 0.0;   // already weighted by lambda_i / lambda_o
    PriorLoss prior;
    double total = 0.0;
  };

  FitObjective(const ParametricBody& body, Points skeleton, std::vector<bool> valid, const FitConfig& cfg);

  const ParamLayout& layout() const { return layout_; }
  bool hasJoints() const { return num_valid_ > 0; }

  // Returns the weighted objective; fills `grad` when non-null. Throws
  // kNumerical when the parameters do not decode to valid rotations.
  double evaluate(const VecX& x, const Terms& terms, const Correspondences* corr, VecX* grad = nullptr,
                  Breakdown* breakdown = nullptr) const;

  Points vertices(const VecX& x) const;

  // Forward-difference Jacobian of the active points (valid joints, then
  // vertices when the mesh term is on), three rows per point.
  PointJacobian jacobian(const VecX& x, const Terms& terms) const;

  // Descent metric at x: Gauss-Newton matrix of the reweighted least-squares
  // majorizer of the distance terms (weights w / max(|r|, eps)) built from
  // `jac`, plus prior curvature and a small isotropic damping.
  Eigen::MatrixXd metric(const VecX& x, const Terms& terms, const Correspondences* corr,
                         const PointJacobian& jac) const;

 private:
  const ParametricBody& body_;
  std::vector<int> order_;
  Points skeleton_;
  std::vector<bool> valid_;
  int num_valid_ = 0;
  FitConfig cfg_;
  ParamLayout layout_;
};

struct FitResult {
  PoseParams theta;
  ShapeParams beta;
  std::vector<double> stage_a_trace;    // skeleton-only objective per iteration
  std::vector<double> objective_trace;  // accepted full objective per outer iteration
  std::vector<double> refreshed_trace;  // full objective after every correspondence refresh
  int outer_iterations = 0;
  double joint_loss = 0.0;  // NaN without valid joints
  double mesh_loss = 0.0;
  PriorLoss prior;
  double objective = 0.0;
  int num_inside = 0;
  int num_outside = 0;
  double inside_fraction = 0.0;
  double chamfer_mm = 0.0;
  std::optional<double> v2v_mm;  // only when the scan shares the body's vertex count
  PosedBody posed;
};

// Two-stage fit. Stage A aligns to the skeleton (skipped when skeleton_only
// is false and no joint is valid but cfg.allow_mesh_only is set); Stage B
// adds the inside/outside scan term unless `skeleton_only` is true.
FitResult fitBody(const ParametricBody& body, const Mesh& scan, const Points& skeleton, const std::vector<bool>& valid,
                  const FitConfig& cfg, bool skeleton_only = false);

// Least-squares rotation and translation mapping `from` onto `to`.
void kabsch(const Points& from, const Points& to, const std::vector<bool>& valid, Mat3& rotation, Vec3& translation);

}  // namespace scanrig
