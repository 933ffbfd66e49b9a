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

#include "geom/mesh.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "common/error.hpp"

namespace scanrig {

double faceArea(const Mesh& mesh, int face) {
  const auto& f = mesh.faces[face];
  const Vec3& a = mesh.vertices[f[0]];
  return 0.5 * (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a).norm();
}

Vec3 faceNormal(const Mesh& mesh, int face) {
  const auto& f = mesh.faces[face];
  const Vec3& a = mesh.vertices[f[0]];
  return (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a).normalized();
}

Mesh validateMesh(Mesh mesh, DegenerateFacePolicy policy) {
  const int64_t n = static_cast<int64_t>(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!mesh.vertices[i].allFinite()) {
      throwInvalid("vertex " + std::to_string(i) + " is not finite");
    }
  }
  std::vector<Face> kept;
  kept.reserve(mesh.faces.size());
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const Face& f = mesh.faces[fi];
    for (int k = 0; k < 3; ++k) {
      if (f[k] < 0 || f[k] >= n) {
        throwInvalid("face " + std::to_string(fi) + " index " + std::to_string(f[k]) +
                     " out of range (vertex count " + std::to_string(n) + ")");
      }
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throwInvalid("face " + std::to_string(fi) + " repeats a vertex index");
    }
    const Vec3& a = mesh.vertices[f[0]];
    const double area = 0.5 * (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a).norm();
    if (!(area > kMinFaceArea)) {
      if (policy == DegenerateFacePolicy::kReject) {
        throwInvalid("face " + std::to_string(fi) + " is degenerate (area " + std::to_string(area) + ")");
      }
      continue;
    }
    kept.push_back(f);
  }
  mesh.faces = std::move(kept);
  if (mesh.uvs && mesh.uvs->size() != mesh.vertices.size()) {
    throwInvalid("uv count " + std::to_string(mesh.uvs->size()) + " does not match vertex count " +
                 std::to_string(n));
  }
  if (mesh.normals) {
    if (mesh.normals->size() != mesh.vertices.size()) {
      throwInvalid("normal count does not match vertex count");
    }
    for (size_t i = 0; i < mesh.normals->size(); ++i) {
      if (std::abs((*mesh.normals)[i].norm() - 1.0) > 1e-6) {
        throwInvalid("normal " + std::to_string(i) + " is not unit length");
      }
    }
  }
  return mesh;
}

Points areaWeightedNormals(const Mesh& mesh) {
  Points acc(mesh.vertices.size(), Vec3::Zero());
  for (const Face& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    // Unnormalized cross product carries twice the face area.
    const Vec3 n = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
    for (int k = 0; k < 3; ++k) {
      acc[f[k]] += n;
    }
  }
  for (auto& n : acc) {
    const double len = n.norm();
    n = len > 0.0 ? Vec3(n / len) : Vec3::UnitZ();
  }
  return acc;
}

Aabb bounds(const Points& points) {
  Aabb box;
  for (const auto& p : points) {
    box.extend(p);
  }
  return box;
}

uint64_t contentHash(const Mesh& mesh) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : mesh.vertices) {
    mix(v.data(), 3 * sizeof(double));
  }
  for (const auto& f : mesh.faces) {
    mix(f.data(), 3 * sizeof(int32_t));
  }
  return h;
}

}  // namespace scanrig
