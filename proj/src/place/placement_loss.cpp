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

#include "place/placement_loss.hpp"

#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace scanrig {
namespace {

constexpr double kSnap = 1e-15;

void cosSin(double yaw, double& c, double& s) {
  c = std::cos(yaw);
  s = std::sin(yaw);
  if (std::abs(c) < kSnap) c = 0.0;
  if (std::abs(s) < kSnap) s = 0.0;
}

void checkInputs(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                 std::span<const PlacementParams> params) {
  layout.validate();
  if (volumes.size() != params.size()) {
    throwInvalid("placement has " + std::to_string(params.size()) + " parameter sets for " +
                 std::to_string(volumes.size()) + " motion volumes");
  }
  for (const PlacementParams& p : params) {
    if (!p.translation.allFinite() || !std::isfinite(p.yaw)) {
      throwInvalid("placement parameters must be finite");
    }
  }
}

std::vector<std::vector<Aabb>> placeAll(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                                        std::span<const PlacementParams> params) {
  std::vector<std::vector<Aabb>> out(volumes.size());
  for (size_t i = 0; i < volumes.size(); ++i) {
    out[i].reserve(volumes[i].frames.size());
    for (const Aabb& b : volumes[i].frames) {
      out[i].push_back(placeBox(b, params[i], layout.up_axis));
    }
  }
  return out;
}

PlacementLoss countLoss(const SceneLayout& layout, const std::vector<std::vector<Aabb>>& placed,
                        bool (*people_collide)(const Aabb&, const Aabb&, double), double resolution) {
  PlacementLoss loss;
  size_t horizon = 0;
  for (const auto& seq : placed) horizon = std::max(horizon, seq.size());
  for (size_t t = 0; t < horizon; ++t) {
    for (size_t i = 0; i < placed.size(); ++i) {
      if (t >= placed[i].size()) continue;
      const Aabb& a = placed[i][t];
      if (!boxInside(a, layout.bounds)) ++loss.out_of_bounds;
      for (const Aabb& o : layout.obstacles) {
        if (boxesOverlap(a, o)) ++loss.collisions;
      }
      for (size_t j = i + 1; j < placed.size(); ++j) {
        if (t < placed[j].size() && people_collide(a, placed[j][t], resolution)) ++loss.collisions;
      }
    }
  }
  return loss;
}

bool overlapIgnoringResolution(const Aabb& a, const Aabb& b, double) { return boxesOverlap(a, b); }

bool shareVoxel(const Aabb& a, const Aabb& b, double resolution) {
  for (int k = 0; k < 3; ++k) {
    const double a0 = std::floor(a.min[k] / resolution);
    const double a1 = std::ceil(a.max[k] / resolution) - 1.0;
    const double b0 = std::floor(b.min[k] / resolution);
    const double b1 = std::ceil(b.max[k] / resolution) - 1.0;
    if (std::max(a0, b0) > std::min(std::max(a0, a1), std::max(b0, b1))) return false;
  }
  return true;
}

}  // namespace

void SceneLayout::validate() const {
  if (up_axis < 0 || up_axis > 2) {
    throwInvalid("scene up axis must be 0, 1 or 2");
  }
  if (!bounds.min.allFinite() || !bounds.max.allFinite() || !(bounds.min.array() < bounds.max.array()).all()) {
    throwInvalid("scene bounds must be finite and nondegenerate");
  }
  for (const Aabb& o : obstacles) {
    if (!o.min.allFinite() || !o.max.allFinite() || !o.valid()) {
      throwInvalid("scene obstacles must be finite boxes with min <= max");
    }
  }
}

Aabb placeBox(const Aabb& local, const PlacementParams& params, int up_axis) {
  const int a0 = (up_axis + 1) % 3;
  const int a1 = (up_axis + 2) % 3;
  double c = 0.0;
  double s = 0.0;
  cosSin(params.yaw, c, s);
  Aabb out;
  out.min[up_axis] = local.min[up_axis];
  out.max[up_axis] = local.max[up_axis];
  out.min[a0] = out.min[a1] = std::numeric_limits<double>::infinity();
  out.max[a0] = out.max[a1] = -std::numeric_limits<double>::infinity();
  for (int corner = 0; corner < 4; ++corner) {
    const double u = (corner & 1) ? local.max[a0] : local.min[a0];
    const double v = (corner & 2) ? local.max[a1] : local.min[a1];
    const double ru = c * u - s * v;
    const double rv = s * u + c * v;
    out.min[a0] = std::min(out.min[a0], ru);
    out.max[a0] = std::max(out.max[a0], ru);
    out.min[a1] = std::min(out.min[a1], rv);
    out.max[a1] = std::max(out.max[a1], rv);
  }
  out.min[a0] += params.translation.x();
  out.max[a0] += params.translation.x();
  out.min[a1] += params.translation.y();
  out.max[a1] += params.translation.y();
  return out;
}

Vec3 placePoint(const Vec3& p, const PlacementParams& params, int up_axis) {
  const int a0 = (up_axis + 1) % 3;
  const int a1 = (up_axis + 2) % 3;
  double c = 0.0;
  double s = 0.0;
  cosSin(params.yaw, c, s);
  Vec3 out = p;
  out[a0] = c * p[a0] - s * p[a1] + params.translation.x();
  out[a1] = s * p[a0] + c * p[a1] + params.translation.y();
  return out;
}

bool boxesOverlap(const Aabb& a, const Aabb& b) {
  return (a.min.array() < b.max.array()).all() && (b.min.array() < a.max.array()).all();
}

bool boxInside(const Aabb& inner, const Aabb& outer) {
  return (inner.min.array() >= outer.min.array()).all() && (inner.max.array() <= outer.max.array()).all();
}

PlacementLoss placementLoss(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                            std::span<const PlacementParams> params) {
  checkInputs(layout, volumes, params);
  return countLoss(layout, placeAll(layout, volumes, params), overlapIgnoringResolution, 0.0);
}

PlacementLoss voxelPlacementLoss(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                                 std::span<const PlacementParams> params, double resolution) {
  checkInputs(layout, volumes, params);
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throwInvalid("voxel resolution must be positive");
  }
  return countLoss(layout, placeAll(layout, volumes, params), shareVoxel, resolution);
}

PlacementLoss bruteForcePlacementLoss(const SceneLayout& layout, std::span<const MotionVolume> volumes,
                                      std::span<const PlacementParams> params) {
  checkInputs(layout, volumes, params);
  const int up = layout.up_axis;
  const int a0 = (up + 1) % 3;
  const int a1 = (up + 2) % 3;

  std::vector<std::vector<Aabb>> placed(volumes.size());
  for (size_t i = 0; i < volumes.size(); ++i) {
    double c = 0.0;
    double s = 0.0;
    cosSin(params[i].yaw, c, s);
    Mat3 r = Mat3::Zero();
    r(up, up) = 1.0;
    r(a0, a0) = c;
    r(a0, a1) = -s;
    r(a1, a0) = s;
    r(a1, a1) = c;
    Vec3 t = Vec3::Zero();
    t[a0] = params[i].translation.x();
    t[a1] = params[i].translation.y();
    for (const Aabb& b : volumes[i].frames) {
      Aabb box;
      for (int corner = 0; corner < 8; ++corner) {
        Vec3 p;
        for (int k = 0; k < 3; ++k) p[k] = (corner >> k & 1) ? b.max[k] : b.min[k];
        Vec3 q;
        for (int row = 0; row < 3; ++row) {
          q[row] = r(row, 0) * p[0] + r(row, 1) * p[1] + r(row, 2) * p[2];
        }
        box.extend(q);
      }
      box.min += t;
      box.max += t;
      placed[i].push_back(box);
    }
  }

  PlacementLoss loss;
  for (size_t i = 0; i < placed.size(); ++i) {
    for (size_t t = 0; t < placed[i].size(); ++t) {
      const Aabb& a = placed[i][t];
      bool inside = true;
      for (int k = 0; k < 3; ++k) {
        inside = inside && a.min[k] >= layout.bounds.min[k] && a.max[k] <= layout.bounds.max[k];
      }
      if (!inside) ++loss.out_of_bounds;
      for (const Aabb& o : layout.obstacles) {
        bool overlap = true;
        for (int k = 0; k < 3; ++k) overlap = overlap && a.min[k] < o.max[k] && o.min[k] < a.max[k];
        if (overlap) ++loss.collisions;
      }
    }
  }
  for (size_t i = 0; i < placed.size(); ++i) {
    for (size_t j = 0; j < placed.size(); ++j) {
      if (j <= i) continue;
      const size_t common = std::min(placed[i].size(), placed[j].size());
      for (size_t t = 0; t < common; ++t) {
        bool overlap = true;
        for (int k = 0; k < 3; ++k) {
          overlap = overlap && placed[i][t].min[k] < placed[j][t].max[k] && placed[j][t].min[k] < placed[i][t].max[k];
        }
        if (overlap) ++loss.collisions;
      }
    }
  }
  return loss;
}

}  // namespace scanrig
