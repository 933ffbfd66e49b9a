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

#include <cmath>
#include <limits>

#include "body/rotation.hpp"
#include "common/error.hpp"
#include "fit/losses.hpp"
#include "geom/winding.hpp"

namespace scanrig {

void FitConfig::validate() const {
  const double w[] = {lambda_j, lambda_i, lambda_o, w_theta, w_beta, tolerance};
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throwInvalid("fit weights and tolerance must be finite and nonnegative");
    }
  }
  if (!(lambda_i < lambda_o)) {
    throwInvalid("fit config requires lambda_i < lambda_o (got " + std::to_string(lambda_i) + " >= " +
                 std::to_string(lambda_o) + ")");
  }
  if (max_outer_iterations < 1 || inner_steps < 1 || stage_a_iterations < 0) {
    throwInvalid("fit iteration counts must be positive");
  }
}

FitConfig makeFitConfig(double lambda_j, double lambda_i, double lambda_o, double w_theta, double w_beta) {
  FitConfig cfg;
  cfg.lambda_j = lambda_j;
  cfg.lambda_i = lambda_i;
  cfg.lambda_o = lambda_o;
  cfg.w_theta = w_theta;
  cfg.w_beta = w_beta;
  cfg.validate();
  return cfg;
}

const char* toString(ClosestPointMode mode) { return mode == ClosestPointMode::kVertex ? "vertex" : "surface"; }

ClosestPointMode closestPointModeFromString(const std::string& s) {
  if (s == "surface") return ClosestPointMode::kSurface;
  if (s == "vertex") return ClosestPointMode::kVertex;
  throwInvalid("unknown closest-point mode '" + s + "' (expected surface or vertex)");
}

double jointLoss(std::span<const Vec3> fitted, std::span<const Vec3> target, const std::vector<bool>& valid,
                 Points* grad) {
  if (fitted.size() != target.size() || valid.size() != target.size()) {
    throwInvalid("joint loss inputs differ in length");
  }
  int n = 0;
  for (bool v : valid) n += v ? 1 : 0;
  if (n == 0) {
    throwInvalid("joint loss needs at least one valid joint");
  }
  if (grad) grad->assign(fitted.size(), Vec3::Zero());
  double sum = 0.0;
  for (size_t j = 0; j < fitted.size(); ++j) {
    if (!valid[j]) continue;
    const Vec3 d = fitted[j] - target[j];
    const double len = d.norm();
    sum += len;
    if (grad && len > 0.0) (*grad)[j] = d / (len * n);
  }
  return sum / n;
}

Correspondences computeCorrespondences(std::span<const Vec3> vertices, const TriangleBvh& scan_bvh, const Mesh& scan,
                                       const FitConfig& cfg) {
  if (scan.empty()) {
    throwInvalid("scan mesh is empty");
  }
  const InsideOutside io = classifyInside(scan, vertices);
  Correspondences corr;
  corr.targets.resize(vertices.size());
  corr.weights.assign(vertices.size(), cfg.lambda_o);
  corr.inside.assign(vertices.size(), false);
  for (int i : io.inside) {
    corr.weights[i] = cfg.lambda_i;
    corr.inside[i] = true;
  }
  corr.num_inside = static_cast<int>(io.inside.size());
  corr.num_outside = static_cast<int>(io.outside.size());
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (cfg.closest_mode == ClosestPointMode::kSurface) {
      corr.targets[i] = scan_bvh.closestPoint(vertices[i]).position;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& s : scan.vertices) {
        const double d = (s - vertices[i]).squaredNorm();
        if (d < best) {
          best = d;
          corr.targets[i] = s;
        }
      }
    }
  }
  return corr;
}

double frozenMeshLoss(std::span<const Vec3> vertices, const Correspondences& corr, Points* grad) {
  if (vertices.size() != corr.targets.size()) {
    throwInvalid("correspondence count does not match vertex count");
  }
  if (grad) grad->assign(vertices.size(), Vec3::Zero());
  double sum = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const Vec3 d = vertices[i] - corr.targets[i];
    const double len = d.norm();
    sum += corr.weights[i] * len;
    if (grad && len > 0.0) (*grad)[i] = corr.weights[i] * d / len;
  }
  return sum;
}

IcpLoss icpLoss(std::span<const Vec3> vertices, const TriangleBvh& scan_bvh, const Mesh& scan, const FitConfig& cfg) {
  cfg.validate();
  const Correspondences corr = computeCorrespondences(vertices, scan_bvh, scan, cfg);
  return {frozenMeshLoss(vertices, corr), corr.num_inside, corr.num_outside};
}

PriorLoss priorLoss(const PoseParams& pose, const ShapeParams& shape) {
  PriorLoss out;
  const Rot6 id = identityRot6d();
  for (const Rot6& r : pose.joint_rotations) {
    out.pose += (r - id).squaredNorm();
  }
  out.shape = shape.beta.squaredNorm();
  return out;
}

}  // namespace scanrig
