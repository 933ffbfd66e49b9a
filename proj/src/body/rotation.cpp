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

#include "body/rotation.hpp"

#include <cmath>

#include "common/error.hpp"

namespace scanrig {
namespace {

constexpr double kParallelEps = 1e-12;

struct Orthonormalized {
  Vec3 a1, a2;
  double len1, lenu;
  Vec3 b1, b2, b3;
};

Orthonormalized orthonormalize(const Rot6& r) {
  Orthonormalized o;
  o.a1 = r.head<3>();
  o.a2 = r.tail<3>();
  if (!r.allFinite()) {
    throwNumerical("6D rotation has non-finite entries");
  }
  o.len1 = o.a1.norm();
  if (!(o.len1 > kParallelEps)) {
    throwNumerical("6D rotation: first column is zero");
  }
  o.b1 = o.a1 / o.len1;
  const Vec3 u = o.a2 - o.b1.dot(o.a2) * o.b1;
  o.lenu = u.norm();
  if (!(o.lenu > kParallelEps * std::max(1.0, o.a2.norm()))) {
    throwNumerical("6D rotation: columns are parallel");
  }
  o.b2 = u / o.lenu;
  o.b3 = o.b1.cross(o.b2);
  return o;
}

}  // namespace

Mat3 rot6dToMatrix(const Rot6& r) {
  const Orthonormalized o = orthonormalize(r);
  Mat3 m;
  m.col(0) = o.b1;
  m.col(1) = o.b2;
  m.col(2) = o.b3;
  return m;
}

Rot6 matrixToRot6d(const Mat3& rotation) {
  Rot6 r;
  r.head<3>() = rotation.col(0);
  r.tail<3>() = rotation.col(1);
  return r;
}

Rot6 identityRot6d() {
  Rot6 r;
  r << 1, 0, 0, 0, 1, 0;
  return r;
}

Rot6 rot6dBackward(const Rot6& r, const Mat3& grad_rotation) {
  const Orthonormalized o = orthonormalize(r);
  const Vec3 g3 = grad_rotation.col(2);
  // b3 = b1 x b2
  Vec3 g_b1 = grad_rotation.col(0) + o.b2.cross(g3);
  Vec3 g_b2 = grad_rotation.col(1) + g3.cross(o.b1);
  // b2 = u / |u|
  const Vec3 g_u = (g_b2 - o.b2 * o.b2.dot(g_b2)) / o.lenu;
  // u = a2 - (b1 . a2) b1
  const double b1a2 = o.b1.dot(o.a2);
  const double gub1 = g_u.dot(o.b1);
  const Vec3 g_a2 = g_u - gub1 * o.b1;
  g_b1 += -gub1 * o.a2 - b1a2 * g_u;
  // b1 = a1 / |a1|
  const Vec3 g_a1 = (g_b1 - o.b1 * o.b1.dot(g_b1)) / o.len1;
  Rot6 g;
  g.head<3>() = g_a1;
  g.tail<3>() = g_a2;
  return g;
}

}  // namespace scanrig
