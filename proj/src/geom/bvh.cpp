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

#include "geom/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace scanrig {
namespace {

constexpr int kLeafSize = 4;

bool better(double d2, int face, double best_d2, int best_face) {
  return d2 < best_d2 || (d2 == best_d2 && face < best_face);
}

}  // namespace

SurfacePoint closestPointOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  Vec3 bary;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    bary = Vec3(1, 0, 0);
  } else {
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    const double vc = d1 * d4 - d3 * d2;
    const double vb = d5 * d2 - d1 * d6;
    const double va = d3 * d6 - d5 * d4;
    if (d3 >= 0.0 && d4 <= d3) {
      bary = Vec3(0, 1, 0);
    } else if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
      const double v = d1 / (d1 - d3);
      bary = Vec3(1 - v, v, 0);
    } else if (d6 >= 0.0 && d5 <= d6) {
      bary = Vec3(0, 0, 1);
    } else if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
      const double w = d2 / (d2 - d6);
      bary = Vec3(1 - w, 0, w);
    } else if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
      const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
      bary = Vec3(0, 1 - w, w);
    } else {
      const double denom = 1.0 / (va + vb + vc);
      const double v = vb * denom;
      const double w = vc * denom;
      bary = Vec3(1 - v - w, v, w);
    }
  }
  bary = bary.cwiseMax(0.0);
  bary /= bary.sum();
  SurfacePoint sp;
  sp.barycentric = bary;
  sp.position = bary[0] * a + bary[1] * b + bary[2] * c;
  sp.distance = (p - sp.position).norm();
  return sp;
}

SurfacePoint closestPointBruteForce(const Mesh& mesh, const Vec3& query) {
  if (mesh.faces.empty()) {
    throwInvalid("closest point query on an empty mesh");
  }
  SurfacePoint best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.numFaces(); ++f) {
    const auto& tri = mesh.faces[f];
    SurfacePoint sp = closestPointOnTriangle(query, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]]);
    const double d2 = (query - sp.position).squaredNorm();
    if (better(d2, f, best_d2, best.face)) {
      best_d2 = d2;
      sp.face = f;
      best = sp;
    }
  }
  return best;
}

TriangleBvh::TriangleBvh(const Mesh& mesh) : mesh_(mesh) {
  if (mesh_.faces.empty()) {
    throwInvalid("cannot build a BVH over an empty mesh");
  }
  const int n = mesh_.numFaces();
  order_.resize(n);
  std::vector<Vec3> centroids(n);
  for (int f = 0; f < n; ++f) {
    order_[f] = f;
    const auto& tri = mesh_.faces[f];
    centroids[f] = (mesh_.vertices[tri[0]] + mesh_.vertices[tri[1]] + mesh_.vertices[tri[2]]) / 3.0;
  }
  nodes_.reserve(2 * (n / kLeafSize + 1));
  build(0, n, centroids);
}

int TriangleBvh::build(int first, int count, std::vector<Vec3>& centroids) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  Aabb centroid_box;
  for (int i = first; i < first + count; ++i) {
    const auto& tri = mesh_.faces[order_[i]];
    for (int k = 0; k < 3; ++k) {
      box.extend(mesh_.vertices[tri[k]]);
    }
    centroid_box.extend(centroids[order_[i]]);
  }
  nodes_[index].box = box;
  if (count <= kLeafSize) {
    nodes_[index].first = first;
    nodes_[index].count = count;
    return index;
  }
  int axis = 0;
  centroid_box.extent().maxCoeff(&axis);
  const int mid = first + count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                   [&](int a, int b) {
                     const double ca = centroids[a][axis];
                     const double cb = centroids[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const int left = build(first, mid - first, centroids);
  const int right = build(mid, first + count - mid, centroids);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

int TriangleBvh::numLeaves() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.left < 0; }));
}

SurfacePoint TriangleBvh::closestPoint(const Vec3& query) const {
  SurfacePoint best;
  double best_d2 = std::numeric_limits<double>::infinity();
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    // Equal-distance boxes are still visited so ties resolve by face index.
    if (node.box.squaredDistance(query) > best_d2) {
      continue;
    }
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int f = order_[i];
        const auto& tri = mesh_.faces[f];
        SurfacePoint sp = closestPointOnTriangle(query, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                                                 mesh_.vertices[tri[2]]);
        const double d2 = (query - sp.position).squaredNorm();
        if (better(d2, f, best_d2, best.face)) {
          best_d2 = d2;
          sp.face = f;
          best = sp;
        }
      }
      continue;
    }
    const double dl = nodes_[node.left].box.squaredDistance(query);
    const double dr = nodes_[node.right].box.squaredDistance(query);
    // Push the farther child first so the nearer one is popped next.
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return best;
}

}  // namespace scanrig
