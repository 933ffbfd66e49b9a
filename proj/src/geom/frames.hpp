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

#include <span>
#include <vector>

#include "geom/bvh.hpp"
#include "geom/mesh.hpp"

namespace scanrig {

// Orthonormal tangent-space basis stored as the columns [tangent, normal,
// bitangent] with bitangent = tangent x normal, so det = +1.
struct LocalFrame {
  Mat3 rotation = Mat3::Identity();

  Vec3 tangent() const { return rotation.col(0); }
  Vec3 normal() const { return rotation.col(1); }
  Vec3 bitangent() const { return rotation.col(2); }

  // Gram-Schmidt of `tangent` against `normal`. When the tangent is
  // (numerically) parallel to the normal, falls back to the world axis least
  // aligned with the normal.
  static LocalFrame fromTangentNormal(const Vec3& tangent, const Vec3& normal);
};

// Per-vertex frames. Tangents are the area-weighted sum of per-face UV
// gradients dP/du; faces whose UV triangle has zero area are skipped.
// Normals come from mesh.normals, or area-weighted face normals if absent.
// Throws if the mesh has no UVs.
std::vector<LocalFrame> vertexFrames(const Mesh& mesh);

// Barycentric blend of the face's vertex tangents and normals, then
// re-orthonormalized.
LocalFrame interpolateFrame(const Mesh& mesh, std::span<const LocalFrame> vertex_frames, const SurfacePoint& at);

// Largest deviation of R^T R from I and of det(R) from 1.
double frameOrthonormalityError(const LocalFrame& frame);

}  // namespace scanrig
