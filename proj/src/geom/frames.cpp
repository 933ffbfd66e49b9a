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

#include "geom/frames.hpp"

#include <cmath>

#include "common/error.hpp"

namespace scanrig {

LocalFrame LocalFrame::fromTangentNormal(const Vec3& tangent, const Vec3& normal) {
  Vec3 n = normal;
  const double nn = n.norm();
  n = nn > 0.0 ? Vec3(n / nn) : Vec3::UnitZ();
  Vec3 t = tangent - tangent.dot(n) * n;
  double tn = t.norm();
  if (!(tn > 1e-12 * std::max(1.0, tangent.norm()))) {
    int axis = 0;
    n.cwiseAbs().minCoeff(&axis);
    const Vec3 e = Vec3::Unit(axis);
    t = e - e.dot(n) * n;
    tn = t.norm();
  }
  t /= tn;
  LocalFrame frame;
  frame.rotation.col(0) = t;
  frame.rotation.col(1) = n;
  frame.rotation.col(2) = t.cross(n);
  return frame;
}

std::vector<LocalFrame> vertexFrames(const Mesh& mesh) {
  if (!mesh.uvs) {
    throwInvalid("tangent frames need per-vertex UV coordinates");
  }
  const auto& uv = *mesh.uvs;
  const Points normals = mesh.normals ? *mesh.normals : areaWeightedNormals(mesh);
  Points tangents(mesh.vertices.size(), Vec3::Zero());
  for (const Face& f : mesh.faces) {
    const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    const Vec2 d1 = uv[f[1]] - uv[f[0]];
    const Vec2 d2 = uv[f[2]] - uv[f[0]];
    const double det = d1.x() * d2.y() - d2.x() * d1.y();
    if (std::abs(det) < 1e-14) {
      continue;
    }
    // dP/du of the affine map from UV to the triangle.
    const Vec3 dpdu = (d2.y() * e1 - d1.y() * e2) / det;
    const double len = dpdu.norm();
    if (!(len > 0.0)) {
      continue;
    }
    const double area = 0.5 * e1.cross(e2).norm();
    const Vec3 contribution = (area / len) * dpdu;
    for (int k = 0; k < 3; ++k) {
      tangents[f[k]] += contribution;
    }
  }
  std::vector<LocalFrame> frames(mesh.vertices.size());
  for (size_t i = 0; i < frames.size(); ++i) {
    frames[i] = LocalFrame::fromTangentNormal(tangents[i], normals[i]);
  }
  return frames;
}

LocalFrame interpolateFrame(const Mesh& mesh, std::span<const LocalFrame> vertex_frames, const SurfacePoint& at) {
  if (at.face < 0 || at.face >= mesh.numFaces()) {
    throwInvalid("surface point face index " + std::to_string(at.face) + " out of range");
  }
  const Face& f = mesh.faces[at.face];
  Vec3 t = Vec3::Zero();
  Vec3 n = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    t += at.barycentric[k] * vertex_frames[f[k]].tangent();
    n += at.barycentric[k] * vertex_frames[f[k]].normal();
  }
  return LocalFrame::fromTangentNormal(t, n);
}

double frameOrthonormalityError(const LocalFrame& frame) {
  const double ortho = (frame.rotation.transpose() * frame.rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(frame.rotation.determinant() - 1.0));
}

}  // namespace scanrig
