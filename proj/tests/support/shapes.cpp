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

#include "support/shapes.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "geom/bvh.hpp"

namespace scanrig::testing {

Mesh cubeMesh(double half, const Vec3& center) {
  Mesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back(center + half * Vec3((i & 1) ? 1 : -1, (i & 2) ? 1 : -1, (i & 4) ? 1 : -1));
  }
  // Outward winding.
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

Mesh icosphere(int subdivisions, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Points v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
              {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                         {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (Vec3& p : v) p.normalize();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      mid[key] = idx;
      return idx;
    };
    std::vector<Face> next;
    for (const Face& face : f) {
      const int a = midpoint(face[0], face[1]);
      const int b = midpoint(face[1], face[2]);
      const int c = midpoint(face[2], face[0]);
      next.push_back({face[0], a, c});
      next.push_back({face[1], b, a});
      next.push_back({face[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  Mesh m;
  for (const Vec3& p : v) m.vertices.push_back(radius * p);
  m.faces = f;
  return m;
}

Mesh torusMesh(double major, double minor, int nu, int nv) {
  Mesh m;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double w = 2.0 * std::numbers::pi * j / nv;
      const double r = major + minor * std::cos(w);
      m.vertices.push_back(Vec3(r * std::cos(u), r * std::sin(u), minor * std::sin(w)));
    }
  }
  auto idx = [&](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      m.faces.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      m.faces.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  }
  return m;
}

Mesh lShapeMesh() {
  // Cells (x, y, z) of an L: a 3x1 bar plus a 1x2 leg, two cells tall.
  std::set<std::array<int, 3>> cells;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 3; ++x) cells.insert({x, 0, z});
    for (int y = 1; y < 3; ++y) cells.insert({0, y, z});
  }
  Mesh m;
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](std::array<int, 3> p) {
    auto it = index.find(p);
    if (it != index.end()) return it->second;
    m.vertices.push_back(Vec3(p[0], p[1], p[2]) * 0.5);
    return index[p] = static_cast<int>(m.vertices.size()) - 1;
  };
  for (const auto& c : cells) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int dir : {-1, 1}) {
        std::array<int, 3> n = c;
        n[axis] += dir;
        if (cells.count(n)) continue;
        const int a1 = (axis + 1) % 3;
        const int a2 = (axis + 2) % 3;
        std::array<std::array<int, 3>, 4> q;
        for (int k = 0; k < 4; ++k) {
          std::array<int, 3> p = c;
          if (dir > 0) p[axis] += 1;
          const int du = (k == 1 || k == 2) ? 1 : 0;
          const int dv = (k >= 2) ? 1 : 0;
          p[a1] += du;
          p[a2] += dv;
          q[k] = p;
        }
        // (a1, a2, axis) is right-handed, so q0 q1 q2 q3 is counterclockwise
        // seen from +axis.
        int i0 = vertex(q[0]), i1 = vertex(q[1]), i2 = vertex(q[2]), i3 = vertex(q[3]);
        if (dir > 0) {
          m.faces.push_back({i0, i1, i2});
          m.faces.push_back({i0, i2, i3});
        } else {
          m.faces.push_back({i0, i2, i1});
          m.faces.push_back({i0, i3, i2});
        }
      }
    }
  }
  return m;
}

Mesh bumpySphere(uint64_t seed, int subdivisions) {
  Mesh m = icosphere(subdivisions);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> bump(0.8, 1.2);
  for (Vec3& v : m.vertices) v *= bump(rng);
  return m;
}

Mesh triangleSoup(uint64_t seed, int num_faces) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> small(0.0, 0.1);
  Mesh m;
  for (int f = 0; f < num_faces; ++f) {
    const Vec3 c(u(rng), u(rng), u(rng));
    for (int k = 0; k < 3; ++k) m.vertices.push_back(c + Vec3(small(rng), small(rng), small(rng)));
    m.faces.push_back({3 * f, 3 * f + 1, 3 * f + 2});
  }
  return m;
}

namespace {

// Moller-Trumbore; counts hits with t > 0.
int rayCrossings(const Mesh& mesh, const Vec3& o, const Vec3& d) {
  int hits = 0;
  for (const Face& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3 e1 = mesh.vertices[f[1]] - a;
    const Vec3 e2 = mesh.vertices[f[2]] - a;
    const Vec3 p = d.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < 1e-14) continue;
    const Vec3 s = o - a;
    const double u = s.dot(p) / det;
    if (u < 0.0 || u > 1.0) continue;
    const Vec3 q = s.cross(e1);
    const double v = d.dot(q) / det;
    if (v < 0.0 || u + v > 1.0) continue;
    if (e2.dot(q) / det > 0.0) ++hits;
  }
  return hits;
}

}  // namespace

bool rayParityInside(const Mesh& mesh, const Vec3& p) {
  static const Vec3 dirs[3] = {Vec3(0.5377, 0.8622, 0.3188).normalized(), Vec3(-0.4336, 0.3426, 0.9346).normalized(),
                               Vec3(0.7254, -0.0631, -0.6855).normalized()};
  int votes = 0;
  for (const Vec3& d : dirs) votes += rayCrossings(mesh, p, d) % 2;
  return votes >= 2;
}

Points sampleQueries(const Mesh& mesh, int count, double margin, std::mt19937_64& rng) {
  const Aabb box = bounds(mesh.vertices);
  const Vec3 pad = 0.1 * box.extent();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TriangleBvh bvh(mesh);
  Points out;
  while (static_cast<int>(out.size()) < count) {
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = box.min[k] - pad[k] + u(rng) * (box.extent()[k] + 2 * pad[k]);
    if (bvh.closestPoint(p).distance > margin) out.push_back(p);
  }
  return out;
}

Vec3 randomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

Mat3 randomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

}  // namespace scanrig::testing
