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

#include "geom/self_intersection.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

namespace scanrig {

bool segmentCrossesTriangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double dp = n.dot(p - a);
  const double dq = n.dot(q - a);
  if ((dp > 0.0 && dq > 0.0) || (dp < 0.0 && dq < 0.0) || dp == dq) {
    return false;
  }
  const double t = dp / (dp - dq);
  if (t <= 0.0 || t >= 1.0) {
    return false;
  }
  const Vec3 x = p + t * (q - p);
  const double s0 = (b - a).cross(x - a).dot(n);
  const double s1 = (c - b).cross(x - b).dot(n);
  const double s2 = (a - c).cross(x - c).dot(n);
  return (s0 > 0.0 && s1 > 0.0 && s2 > 0.0) || (s0 < 0.0 && s1 < 0.0 && s2 < 0.0);
}

int countSelfIntersections(const Mesh& mesh) {
  const int nf = mesh.numFaces();
  // Weld coincident vertices so seam duplicates count as shared.
  std::map<std::tuple<double, double, double>, int> weld;
  std::vector<int> canon(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& v = mesh.vertices[i];
    canon[i] = weld.emplace(std::make_tuple(v.x(), v.y(), v.z()), static_cast<int>(i)).first->second;
  }
  std::vector<Aabb> boxes(nf);
  std::vector<int> order(nf);
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      boxes[f].extend(mesh.vertices[mesh.faces[f][k]]);
    }
    order[f] = f;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return boxes[a].min.x() < boxes[b].min.x() || (boxes[a].min.x() == boxes[b].min.x() && a < b);
  });
  auto tri = [&](int f, int k) -> const Vec3& { return mesh.vertices[mesh.faces[f][k]]; };
  int count = 0;
  for (int i = 0; i < nf; ++i) {
    const int fa = order[i];
    for (int j = i + 1; j < nf; ++j) {
      const int fb = order[j];
      if (boxes[fb].min.x() > boxes[fa].max.x()) {
        break;
      }
      if ((boxes[fa].min.array() > boxes[fb].max.array()).any() ||
          (boxes[fb].min.array() > boxes[fa].max.array()).any()) {
        continue;
      }
      bool shared = false;
      for (int u = 0; u < 3 && !shared; ++u) {
        for (int v = 0; v < 3; ++v) {
          if (canon[mesh.faces[fa][u]] == canon[mesh.faces[fb][v]]) {
            shared = true;
            break;
          }
        }
      }
      if (shared) {
        continue;
      }
      bool hit = false;
      for (int e = 0; e < 3 && !hit; ++e) {
        hit = segmentCrossesTriangle(tri(fa, e), tri(fa, (e + 1) % 3), tri(fb, 0), tri(fb, 1), tri(fb, 2)) ||
              segmentCrossesTriangle(tri(fb, e), tri(fb, (e + 1) % 3), tri(fa, 0), tri(fa, 1), tri(fa, 2));
      }
      count += hit ? 1 : 0;
    }
  }
  return count;
}

}  // namespace scanrig
