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

#include "geom/winding.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace scanrig {
namespace {

// Van Oosterom-Strackee signed solid angle of triangle (a, b, c) relative
// to the origin, halved. la, lb, lc are the vector lengths.
inline double halfSolidAngle(const Vec3& a, const Vec3& b, const Vec3& c, double la, double lb, double lc) {
  const double det = a.dot(b.cross(c));
  if (det == 0.0) {
    return 0.0;
  }
  const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
  return std::atan2(det, den);
}

}  // namespace

double windingNumber(const Mesh& mesh, const Vec3& query) {
  std::vector<Vec3> rel(mesh.vertices.size());
  std::vector<double> len(mesh.vertices.size());
  for (size_t i = 0; i < rel.size(); ++i) {
    rel[i] = mesh.vertices[i] - query;
    len[i] = rel[i].norm();
  }
  double sum = 0.0;
  for (const Face& f : mesh.faces) {
    sum += halfSolidAngle(rel[f[0]], rel[f[1]], rel[f[2]], len[f[0]], len[f[1]], len[f[2]]);
  }
  // Each half angle is Omega/2, so divide by 2*pi instead of 4*pi.
  return sum / (2.0 * std::numbers::pi);
}

InsideOutside classifyInside(const Mesh& mesh, std::span<const Vec3> points) {
  InsideOutside out;
  for (size_t i = 0; i < points.size(); ++i) {
    if (windingNumber(mesh, points[i]) > kInsideThreshold) {
      out.inside.push_back(static_cast<int>(i));
    } else {
      out.outside.push_back(static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace scanrig
