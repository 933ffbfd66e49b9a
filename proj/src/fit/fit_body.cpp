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

#include "fit/fit_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "body/rotation.hpp"
#include "common/error.hpp"
#include "geom/bvh.hpp"
#include "geom/metrics.hpp"

namespace scanrig {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr double kFdStep = 1e-6;
constexpr double kReweightFloor = 1e-3;  // meters
constexpr double kDamping = 1e-6;

[[noreturn]] void throwNonFinite(const VecX& x) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite fit objective at parameters [";
  for (int k = 0; k < x.size(); ++k) {
    os << (k ? ", " : "") << x[k];
  }
  os << "]";
  throw Error(ErrorCode::kNumerical, os.str());
}

// Objective value, or +inf when the parameters do not decode.
double tryEvaluate(const FitObjective& obj, const VecX& x, const FitObjective::Terms& terms,
                   const Correspondences* corr) {
  try {
    const double f = obj.evaluate(x, terms, corr);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNumerical) throw;
    return std::numeric_limits<double>::infinity();
  }
}

struct Descent {
  std::vector<VecX> iterates;  // after each accepted step
  std::vector<double> values;
};

// Gradient descent preconditioned by the reweighted Gauss-Newton metric,
// with Armijo backtracking from a unit step.
Descent descend(const FitObjective& obj, VecX x, const FitObjective::Terms& terms, const Correspondences* corr,
                const PointJacobian& jac, int steps) {
  Descent out;
  VecX g;
  double f = obj.evaluate(x, terms, corr, &g);
  if (!std::isfinite(f)) throwNonFinite(x);
  for (int s = 0; s < steps; ++s) {
    const VecX d = -obj.metric(x, terms, corr, jac).ldlt().solve(g);
    const double slope = g.dot(d);
    if (!(slope < 0.0)) break;
    double alpha = 1.0;
    bool accepted = false;
    VecX trial;
    for (int h = 0; h < kMaxHalvings; ++h, alpha *= 0.5) {
      trial = x + alpha * d;
      if (tryEvaluate(obj, trial, terms, corr) <= f + kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    x = trial;
    f = obj.evaluate(x, terms, corr, &g);
    out.iterates.push_back(x);
    out.values.push_back(f);
  }
  return out;
}

Correspondences refresh(const FitObjective& obj, const VecX& x, const TriangleBvh& bvh, const Mesh& scan,
                        const FitConfig& cfg) {
  const Points v = obj.vertices(x);
  return computeCorrespondences(v, bvh, scan, cfg);
}

}  // namespace

VecX ParamLayout::pack(const PoseParams& pose, const ShapeParams& shape) const {
  if (static_cast<int>(pose.joint_rotations.size()) != num_joints_ || shape.beta.size() != num_shapes_) {
    throwInvalid("pose or shape size does not match the body");
  }
  VecX x(size());
  x.segment<6>(0) = pose.global_rotation;
  x.segment<3>(6) = pose.translation;
  for (int j = 0; j < num_joints_; ++j) {
    x.segment<6>(jointOffset(j)) = pose.joint_rotations[j];
  }
  x.segment(shapeOffset(), num_shapes_) = shape.beta;
  return x;
}

void ParamLayout::unpack(const VecX& x, PoseParams& pose, ShapeParams& shape) const {
  pose.global_rotation = x.segment<6>(0);
  pose.translation = x.segment<3>(6);
  pose.joint_rotations.resize(num_joints_);
  for (int j = 0; j < num_joints_; ++j) {
    pose.joint_rotations[j] = x.segment<6>(jointOffset(j));
  }
  shape.beta = x.segment(shapeOffset(), num_shapes_);
}

FitObjective::FitObjective(const ParametricBody& body, Points skeleton, std::vector<bool> valid, const FitConfig& cfg)
    : body_(body),
      order_(topologicalOrder(body.parents)),
      skeleton_(std::move(skeleton)),
      valid_(std::move(valid)),
      cfg_(cfg),
      layout_(body.numJoints(), body.numShapes()) {
  cfg_.validate();
  if (static_cast<int>(skeleton_.size()) != body.numJoints() || skeleton_.size() != valid_.size()) {
    throwInvalid("skeleton has " + std::to_string(skeleton_.size()) + " joints, body has " +
                 std::to_string(body.numJoints()));
  }
  for (size_t j = 0; j < valid_.size(); ++j) {
    if (valid_[j] && !skeleton_[j].allFinite()) {
      throwInvalid("skeleton joint " + std::to_string(j) + " is marked valid but not finite");
    }
    num_valid_ += valid_[j] ? 1 : 0;
  }
}

double FitObjective::evaluate(const VecX& x, const Terms& terms, const Correspondences* corr, VecX* grad,
                              Breakdown* breakdown) const {
  if (terms.mesh && corr == nullptr) {
    throw Error(ErrorCode::kInternal, "mesh term requested without correspondences");
  }
  PoseParams pose;
  ShapeParams shape;
  layout_.unpack(x, pose, shape);
  const BodyEvaluation e = evaluateBody(body_, order_, pose, shape, terms.mesh);

  const bool use_joints = terms.joints && num_valid_ > 0;
  Breakdown b;
  Points gj;
  Points gv;
  if (use_joints) {
    b.joint = jointLoss(e.joints, skeleton_, valid_, grad ? &gj : nullptr);
    b.total += cfg_.lambda_j * b.joint;
    for (Vec3& v : gj) v *= cfg_.lambda_j;
  }
  if (terms.mesh) {
    b.mesh = frozenMeshLoss(e.vertices, *corr, grad ? &gv : nullptr);
    b.total += b.mesh;
  }
  if (terms.prior) {
    b.prior = priorLoss(pose, shape);
    b.total += cfg_.w_theta * b.prior.pose + cfg_.w_beta * b.prior.shape;
  }
  if (grad) {
    const BodyGradient bg = backpropagateBody(body_, order_, pose, e, gv, gj);
    grad->resize(layout_.size());
    grad->segment<6>(0) = bg.global_rotation;
    grad->segment<3>(6) = bg.translation;
    const Rot6 id = identityRot6d();
    for (int j = 0; j < body_.numJoints(); ++j) {
      Rot6 gr = bg.joint_rotations[j];
      if (terms.prior) gr += 2.0 * cfg_.w_theta * (pose.joint_rotations[j] - id);
      grad->segment<6>(layout_.jointOffset(j)) = gr;
    }
    VecX gb = bg.beta;
    if (terms.prior) gb += 2.0 * cfg_.w_beta * shape.beta;
    grad->segment(layout_.shapeOffset(), body_.numShapes()) = gb;
  }
  if (breakdown) *breakdown = b;
  return b.total;
}

Points FitObjective::vertices(const VecX& x) const {
  PoseParams pose;
  ShapeParams shape;
  layout_.unpack(x, pose, shape);
  return evaluateBody(body_, order_, pose, shape, true).vertices;
}

Eigen::MatrixXd PointJacobian::weightedGram(const VecX& point_weights) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(num_params, num_params);
  for (const Block& b : blocks) {
    Eigen::MatrixXd scaled = b.values;
    for (size_t p = 0; p < b.points.size(); ++p) {
      scaled.middleRows<3>(3 * p) *= std::sqrt(point_weights[b.points[p]]);
    }
    const Eigen::MatrixXd gram = scaled.transpose() * scaled;
    for (size_t c = 0; c < b.cols.size(); ++c) {
      for (size_t r = 0; r < b.cols.size(); ++r) {
        m(b.cols[r], b.cols[c]) += gram(r, c);
      }
    }
  }
  return m;
}

PointJacobian FitObjective::jacobian(const VecX& x, const Terms& terms) const {
  PoseParams pose;
  ShapeParams shape;
  layout_.unpack(x, pose, shape);
  const BodyEvaluation base = evaluateBody(body_, order_, pose, shape, terms.mesh);
  const bool use_joints = terms.joints && num_valid_ > 0;
  const int points = (use_joints ? num_valid_ : 0) + (terms.mesh ? body_.numVertices() : 0);

  Eigen::MatrixXd dense(3 * points, layout_.size());
  for (int k = 0; k < layout_.size(); ++k) {
    VecX xk = x;
    xk[k] += kFdStep;
    layout_.unpack(xk, pose, shape);
    const BodyEvaluation e = evaluateBody(body_, order_, pose, shape, terms.mesh);
    int r = 0;
    if (use_joints) {
      for (size_t j = 0; j < e.joints.size(); ++j) {
        if (valid_[j]) dense.col(k).segment<3>(3 * r++) = (e.joints[j] - base.joints[j]) / kFdStep;
      }
    }
    if (terms.mesh) {
      for (size_t i = 0; i < e.vertices.size(); ++i) {
        dense.col(k).segment<3>(3 * r++) = (e.vertices[i] - base.vertices[i]) / kFdStep;
      }
    }
  }

  PointJacobian jac;
  jac.num_points = points;
  jac.num_params = layout_.size();
  std::map<std::vector<int>, int> block_of;
  for (int p = 0; p < points; ++p) {
    std::vector<int> cols;
    for (int k = 0; k < layout_.size(); ++k) {
      if (!dense.block<3, 1>(3 * p, k).isZero(0.0)) cols.push_back(k);
    }
    auto [it, inserted] = block_of.emplace(cols, static_cast<int>(jac.blocks.size()));
    if (inserted) jac.blocks.push_back({{}, std::move(cols), {}});
    jac.blocks[it->second].points.push_back(p);
  }
  for (PointJacobian::Block& b : jac.blocks) {
    b.values.resize(3 * b.points.size(), b.cols.size());
    for (size_t p = 0; p < b.points.size(); ++p) {
      for (size_t c = 0; c < b.cols.size(); ++c) {
        b.values.block<3, 1>(3 * p, c) = dense.block<3, 1>(3 * b.points[p], b.cols[c]);
      }
    }
  }
  return jac;
}

Eigen::MatrixXd FitObjective::metric(const VecX& x, const Terms& terms, const Correspondences* corr,
                                     const PointJacobian& jac) const {
  PoseParams pose;
  ShapeParams shape;
  layout_.unpack(x, pose, shape);
  const BodyEvaluation e = evaluateBody(body_, order_, pose, shape, terms.mesh);
  const bool use_joints = terms.joints && num_valid_ > 0;

  VecX point_weight(jac.num_points);
  int r = 0;
  auto set = [&](double w) {
    if (r >= point_weight.size()) {
      throw Error(ErrorCode::kInternal, "jacobian does not match the active terms");
    }
    point_weight[r++] = w;
  };
  if (use_joints) {
    for (size_t j = 0; j < e.joints.size(); ++j) {
      if (!valid_[j]) continue;
      const double dist = (e.joints[j] - skeleton_[j]).norm();
      set(cfg_.lambda_j / (num_valid_ * std::max(dist, kReweightFloor)));
    }
  }
  if (terms.mesh) {
    for (size_t i = 0; i < e.vertices.size(); ++i) {
      const double dist = (e.vertices[i] - corr->targets[i]).norm();
      set(corr->weights[i] / std::max(dist, kReweightFloor));
    }
  }
  if (r != jac.num_points) {
    throw Error(ErrorCode::kInternal, "jacobian does not match the active terms");
  }
  Eigen::MatrixXd m = jac.weightedGram(point_weight);
  if (terms.prior) {
    for (int j = 0; j < body_.numJoints(); ++j) {
      m.diagonal().segment<6>(layout_.jointOffset(j)).array() += 2.0 * cfg_.w_theta;
    }
    m.diagonal().segment(layout_.shapeOffset(), body_.numShapes()).array() += 2.0 * cfg_.w_beta;
  }
  const double damping = kDamping * std::max(m.diagonal().mean(), 1e-12);
  m.diagonal().array() += damping;
  return m;
}

void kabsch(const Points& from, const Points& to, const std::vector<bool>& valid, Mat3& rotation, Vec3& translation) {
  Vec3 cf = Vec3::Zero();
  Vec3 ct = Vec3::Zero();
  int n = 0;
  for (size_t j = 0; j < from.size(); ++j) {
    if (!valid[j]) continue;
    cf += from[j];
    ct += to[j];
    ++n;
  }
  if (n == 0) throwInvalid("rigid alignment needs at least one valid point");
  cf /= n;
  ct /= n;
  Mat3 cov = Mat3::Zero();
  for (size_t j = 0; j < from.size(); ++j) {
    if (valid[j]) cov += (to[j] - ct) * (from[j] - cf).transpose();
  }
  rotation = Mat3::Identity();
  if (n >= 3) {
    Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sv = svd.singularValues();
    // Collinear or coincident points leave the rotation underdetermined.
    if (sv[1] > 1e-9 * std::max(sv[0], 1e-300)) {
      Mat3 fix = Mat3::Identity();
      fix(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
      rotation = svd.matrixU() * fix * svd.matrixV().transpose();
    }
  }
  translation = ct - rotation * cf;
}

FitResult fitBody(const ParametricBody& body, const Mesh& scan, const Points& skeleton, const std::vector<bool>& valid,
                  const FitConfig& cfg, bool skeleton_only) {
  cfg.validate();
  if (!skeleton_only && scan.empty()) {
    throwInvalid("scan mesh is empty");
  }
  const FitObjective obj(body, skeleton, valid, cfg);
  if (!obj.hasJoints() && (skeleton_only || !cfg.allow_mesh_only)) {
    throwInvalid("no valid skeleton joints and mesh-only fitting is disabled");
  }
  const ParamLayout& layout = obj.layout();
  FitResult result;

  // Rigid initialization at the mean shape.
  PoseParams pose = PoseParams::identity(body.numJoints());
  ShapeParams shape = ShapeParams::zero(body.numShapes());
  Mat3 r0 = Mat3::Identity();
  Vec3 t0 = Vec3::Zero();
  if (obj.hasJoints()) {
    kabsch(modelJoints(body, pose, shape), skeleton, valid, r0, t0);
  } else {
    const Points rest = shapeMesh(body, shape);
    t0 = bounds(scan.vertices).center() - bounds(rest).center();
  }
  pose.global_rotation = matrixToRot6d(r0);
  pose.translation = t0;
  VecX x = layout.pack(pose, shape);

  if (obj.hasJoints()) {
    const FitObjective::Terms terms{true, false, true};
    result.stage_a_trace.push_back(obj.evaluate(x, terms, nullptr));
    constexpr int kRescaleEvery = 10;
    for (int done = 0; done < cfg.stage_a_iterations;) {
      const int n = std::min(kRescaleEvery, cfg.stage_a_iterations - done);
      const Descent d = descend(obj, x, terms, nullptr, obj.jacobian(x, terms), n);
      if (d.iterates.empty()) break;
      x = d.iterates.back();
      result.stage_a_trace.insert(result.stage_a_trace.end(), d.values.begin(), d.values.end());
      done += static_cast<int>(d.iterates.size());
      if (static_cast<int>(d.iterates.size()) < n) break;
    }
  }

  std::optional<TriangleBvh> bvh;
  if (!scan.empty()) bvh.emplace(scan);
  if (!skeleton_only) {
    const FitObjective::Terms terms{true, true, true};
    Correspondences corr = refresh(obj, x, *bvh, scan, cfg);
    double f = obj.evaluate(x, terms, &corr);
    if (!std::isfinite(f)) throwNonFinite(x);
    result.objective_trace.push_back(f);
    result.refreshed_trace.push_back(f);
    for (int it = 0; it < cfg.max_outer_iterations; ++it) {
      const Descent d = descend(obj, x, terms, &corr, obj.jacobian(x, terms), cfg.inner_steps);
      if (d.iterates.empty()) break;
      // Accept the latest inner iterate whose refreshed objective improves;
      // fall back to earlier iterates by halving the step count.
      bool accepted = false;
      for (size_t count = d.iterates.size(); count >= 1; count /= 2) {
        const VecX& cand = d.iterates[count - 1];
        Correspondences c2 = refresh(obj, cand, *bvh, scan, cfg);
        const double f2 = obj.evaluate(cand, terms, &c2);
        if (!std::isfinite(f2)) throwNonFinite(cand);
        result.refreshed_trace.push_back(f2);
        if (f2 < f) {
          const double decrease = f - f2;
          x = cand;
          corr = std::move(c2);
          f = f2;
          result.objective_trace.push_back(f);
          ++result.outer_iterations;
          accepted = decrease >= cfg.tolerance;
          break;
        }
        if (count == 1) break;
      }
      if (!accepted) break;
    }
  }

  layout.unpack(x, result.theta, result.beta);
  result.posed = poseMesh(body, result.theta, result.beta);
  if (obj.hasJoints()) {
    result.joint_loss = jointLoss(result.posed.joints, skeleton, valid);
  } else {
    result.joint_loss = std::numeric_limits<double>::quiet_NaN();
  }
  result.prior = priorLoss(result.theta, result.beta);
  if (!scan.empty()) {
    result.chamfer_mm = chamferDistanceMm(result.posed.mesh, scan);
    if (scan.numVertices() == body.numVertices()) {
      result.v2v_mm = v2vErrorMm(result.posed.mesh.vertices, scan.vertices);
    }
    const Correspondences corr = computeCorrespondences(result.posed.mesh.vertices, *bvh, scan, cfg);
    result.mesh_loss = frozenMeshLoss(result.posed.mesh.vertices, corr);
    result.num_inside = corr.num_inside;
    result.num_outside = corr.num_outside;
    result.inside_fraction = static_cast<double>(corr.num_inside) / body.numVertices();
  }
  result.objective = (obj.hasJoints() ? cfg.lambda_j * result.joint_loss : 0.0) + result.mesh_loss +
                     cfg.w_theta * result.prior.pose + cfg.w_beta * result.prior.shape;
  return result;
}

}  // namespace scanrig
