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

#include <memory>
#include <vector>

#include "geom/mesh.hpp"

namespace scanrig {

struct SurfacePoint {
  int face = -1;
  Vec3 barycentric = Vec3::Zero();
  Vec3 position = Vec3::Zero();
  double distance = 0.0;
};

// Closest point on triangle (a, b, c) to p. Barycentrics are nonnegative and
// sum to 1; position is recomputed from them.
SurfacePoint closestPointOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Exhaustive search over all faces, lowest face index on ties.
SurfacePoint closestPointBruteForce(const Mesh& mesh, const Vec3& query);

// Bounding volume hierarchy over a mesh's triangles. Immutable once built;
// concurrent queries are safe. Holds a copy of the geometry it indexes.
class TriangleBvh {
 public:
  explicit TriangleBvh(const Mesh& mesh);

  // Globally nearest surface point; ties resolved to the lowest face index.
  SurfacePoint closestPoint(const Vec3& query) const;

  int numNodes() const { return static_cast<int>(nodes_.size()); }
  int numLeaves() const;
  const Mesh& mesh() const { return mesh_; }

 private:
  struct Node {
    Aabb box;
    int left = -1;  // child index, -1 for leaves
    int right = -1;
    int first = 0;  // range into order_ for leaves
    int count = 0;
  };

  int build(int first, int count, std::vector<Vec3>& centroids);

  Mesh mesh_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
};

}  // namespace scanrig
