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

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "common/types.hpp"

namespace scanrig {

// Triangle mesh in meters. Scans and body-model outputs share this type.
struct Mesh {
  Points vertices;
  std::vector<Face> faces;
  std::optional<std::vector<Vec2>> uvs;
  std::optional<Points> normals;

  bool empty() const { return faces.empty(); }
  int numVertices() const { return static_cast<int>(vertices.size()); }
  int numFaces() const { return static_cast<int>(faces.size()); }
};

enum class DegenerateFacePolicy {
  kReject,
  kDrop,
};

inline constexpr double kMinFaceArea = 1e-12;

// Checks index bounds, repeated indices, face area and normal length. Under
// kDrop, zero-area faces are removed and the cleaned mesh is returned;
// everything else throws.
Mesh validateMesh(Mesh mesh, DegenerateFacePolicy policy = DegenerateFacePolicy::kReject);

double faceArea(const Mesh& mesh, int face);
Vec3 faceNormal(const Mesh& mesh, int face);

// Area-weighted average of incident face normals.
Points areaWeightedNormals(const Mesh& mesh);

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool valid() const { return (min.array() <= max.array()).all(); }
  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  double diagonal() const { return extent().norm(); }
  // Squared distance from p to the box (0 inside).
  double squaredDistance(const Vec3& p) const {
    const Vec3 d = (min - p).cwiseMax(p - max).cwiseMax(Vec3::Zero());
    return d.squaredNorm();
  }
};

Aabb bounds(const Points& points);

// 64-bit FNV-1a over vertex coordinates and face indices.
uint64_t contentHash(const Mesh& mesh);

}  // namespace scanrig
