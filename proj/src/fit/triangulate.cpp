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

#include "common/error.hpp"
#include "fit/triangulate.hpp"

namespace scanrig {
namespace {

constexpr double kMinBaseline = 1e-6;  // meters

}  // namespace

void CameraView::validate() const {
  if (!projection.allFinite()) {
    throwInvalid("camera projection has non-finite entries");
  }
  const Mat3 m = projection.leftCols<3>();
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(m.determinant()) <= 1e-12 * scale * scale * scale) {
    throwInvalid("camera projection has a singular left 3x3 block");
  }
}

Vec3 CameraView::center() const {
  const Mat3 m = projection.leftCols<3>();
  return -m.partialPivLu().solve(projection.col(3));
}

Vec2 CameraView::project(const Vec3& point) const {
  const Vec3 h = projection * point.homogeneous();
  return h.hnormalized();
}

bool CameraView::inFront(const Vec3& point) const {
  const Vec3 h = projection * point.homogeneous();
  return h.z() * projection.leftCols<3>().determinant() > 0.0;
}

int TriangulatedSkeleton::numValid() const {
  int n = 0;
  for (bool v : valid) {
    n += v ? 1 : 0;
  }
  return n;
}

Vec3 triangulatePoint(const std::vector<CameraView>& cameras, const std::vector<Vec2>& pixels,
                      const std::vector<double>& weights) {
  const int n = static_cast<int>(cameras.size());
  Eigen::MatrixXd design(2 * n, 4);
  for (int k = 0; k < n; ++k) {
    const Mat34& p = cameras[k].projection;
    // Cross-product constraints x ^ (P X) = 0, two independent rows per view.
    Eigen::RowVector4d r0 = pixels[k].x() * p.row(2) - p.row(0);
    Eigen::RowVector4d r1 = pixels[k].y() * p.row(2) - p.row(1);
    design.row(2 * k) = weights[k] * r0 / r0.norm();
    design.row(2 * k + 1) = weights[k] * r1 / r1.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeFullV);
  const Vec4 h = svd.matrixV().col(3);
  if (std::abs(h[3]) < 1e-12 * h.head<3>().norm()) {
    return Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  }
  return h.hnormalized();
}

TriangulatedSkeleton triangulateKeypoints(const std::vector<std::pair<CameraView, Keypoints2D>>& views) {
  size_t num_joints = 0;
  for (const auto& [cam, kp] : views) {
    cam.validate();
    num_joints = std::max(num_joints, kp.points.size());
  }
  for (const auto& [cam, kp] : views) {
    if (kp.points.size() != num_joints) {
      throwInvalid("keypoint views disagree on joint count");
    }
  }
  TriangulatedSkeleton out;
  out.joints.assign(num_joints, Vec3::Zero());
  out.valid.assign(num_joints, false);
  out.reprojection_rms.assign(num_joints, std::numeric_limits<double>::quiet_NaN());
  out.diagnostics.assign(num_joints, "");

  std::vector<Vec3> centers;
  for (const auto& [cam, kp] : views) {
    centers.push_back(cam.center());
  }

  for (size_t j = 0; j < num_joints; ++j) {
    std::vector<CameraView> cams;
    std::vector<Vec2> pix;
    std::vector<double> w;
    std::vector<Vec3> cs;
    for (size_t v = 0; v < views.size(); ++v) {
      const Vec3& obs = views[v].second.points[j];
      if (obs.z() > 0.0 && obs.allFinite()) {
        cams.push_back(views[v].first);
        pix.push_back(obs.head<2>());
        w.push_back(std::min(1.0, obs.z()));
        cs.push_back(centers[v]);
      }
    }
    if (cams.size() < 2) {
      out.diagnostics[j] = "observed in fewer than 2 views";
      continue;
    }
    double baseline = 0.0;
    for (size_t a = 0; a < cs.size(); ++a) {
      for (size_t b = a + 1; b < cs.size(); ++b) {
        baseline = std::max(baseline, (cs[a] - cs[b]).norm());
      }
    }
    if (baseline < kMinBaseline) {
      out.diagnostics[j] = "degenerate baseline: observing camera centers coincide";
      continue;
    }
    const Vec3 x = triangulatePoint(cams, pix, w);
    if (!x.allFinite()) {
      out.diagnostics[j] = "triangulated point at infinity";
      continue;
    }
    double sq = 0.0;
    for (size_t k = 0; k < cams.size(); ++k) {
      sq += (cams[k].project(x) - pix[k]).squaredNorm();
    }
    out.joints[j] = x;
    out.valid[j] = true;
    out.reprojection_rms[j] = std::sqrt(sq / static_cast<double>(cams.size()));
  }
  return out;
}

}  // namespace scanrig
