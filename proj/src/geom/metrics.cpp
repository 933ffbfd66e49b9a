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

#include "geom/metrics.hpp"

#include "common/error.hpp"
#include "geom/bvh.hpp"

namespace scanrig {

double v2vErrorMm(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.size() != b.size()) {
    throwInvalid("v2v error: vertex counts differ (" + std::to_string(a.size()) + " vs " +
                 std::to_string(b.size()) + ")");
  }
  if (a.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += (a[i] - b[i]).norm();
  }
  return 1000.0 * sum / static_cast<double>(a.size());
}

double meanPointToSurface(const Mesh& from, const Mesh& to) {
  if (from.vertices.empty()) {
    throwInvalid("point-to-surface distance from an empty vertex set");
  }
  const TriangleBvh bvh(to);
  double sum = 0.0;
  for (const auto& p : from.vertices) {
    sum += bvh.closestPoint(p).distance;
  }
  return sum / static_cast<double>(from.vertices.size());
}

double chamferDistanceMm(const Mesh& a, const Mesh& b) {
  if (a.empty() || b.empty()) {
    throwInvalid("chamfer distance needs two non-empty meshes");
  }
  const double ab = meanPointToSurface(a, b);
  const double ba = meanPointToSurface(b, a);
  return 1000.0 * 0.5 * (ab + ba);
}

}  // namespace scanrig
