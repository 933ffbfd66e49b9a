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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "common/error.hpp"
#include "geom/bvh.hpp"
#include "geom/frames.hpp"
#include "geom/metrics.hpp"
#include "geom/obj_io.hpp"
#include "geom/self_intersection.hpp"
#include "geom/winding.hpp"
#include "support/shapes.hpp"

namespace scanrig {
namespace {

using testing::cubeMesh;
using testing::icosphere;

TEST(MeshValidation, RejectsBadIndexAndDegenerateFace) {
  Mesh m = cubeMesh();
  m.faces.push_back({0, 1, 99});
  EXPECT_THROW(validateMesh(m), Error);

  Mesh d = cubeMesh();
  d.vertices.push_back(d.vertices[0]);
  d.faces.push_back({0, 8, 1});
  EXPECT_THROW(validateMesh(d), Error);
  const Mesh cleaned = validateMesh(d, DegenerateFacePolicy::kDrop);
  EXPECT_EQ(cleaned.numFaces(), 12);
}

TEST(MeshValidation, RepeatedIndexRejected) {
  Mesh m = cubeMesh();
  m.faces[0] = {0, 0, 1};
  EXPECT_THROW(validateMesh(m), Error);
}

TEST(ObjIo, RoundTripKeepsTopologyAndUvs) {
  Mesh m = icosphere(1);
  std::vector<Vec2> uvs;
  for (const Vec3& v : m.vertices) uvs.emplace_back(0.5 + 0.5 * v.x(), 0.5 + 0.5 * v.y());
  m.uvs = uvs;
  std::stringstream ss;
  writeObj(ss, m);
  const Mesh back = readObj(ss, "mem");
  ASSERT_EQ(back.numVertices(), m.numVertices());
  ASSERT_EQ(back.faces, m.faces);
  ASSERT_TRUE(back.uvs.has_value());
  for (int i = 0; i < m.numVertices(); ++i) {
    EXPECT_LT((back.vertices[i] - m.vertices[i]).norm(), 1e-8);
  }
}

TEST(ObjIo, MalformedFaceIndexNamesLine) {
  std::stringstream ss("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 7\n");
  try {
    readObj(ss, "bad.obj");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("bad.obj:4"), std::string::npos) << e.what();
  }
}

TEST(ObjIo, QuadsAreFanTriangulated) {
  std::stringstream ss("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  const Mesh m = readObj(ss, "quad.obj");
  EXPECT_EQ(m.numFaces(), 2);
}

TEST(ClosestPoint, TriangleRegions) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  EXPECT_NEAR(closestPointOnTriangle(Vec3(0.2, 0.2, 1), a, b, c).distance, 1.0, 1e-15);
  EXPECT_NEAR(closestPointOnTriangle(Vec3(-1, -1, 0), a, b, c).distance, std::sqrt(2.0), 1e-15);
  const SurfacePoint edge = closestPointOnTriangle(Vec3(0.5, -2, 0), a, b, c);
  EXPECT_NEAR(edge.distance, 2.0, 1e-15);
  EXPECT_NEAR(edge.barycentric.sum(), 1.0, 1e-15);
  EXPECT_TRUE((edge.barycentric.array() >= 0).all());
}

TEST(Bvh, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const Mesh m = seed % 2 ? testing::triangleSoup(seed, 500) : testing::bumpySphere(seed, 3);
    const TriangleBvh bvh(m);
    for (int q = 0; q < 50; ++q) {
      const Vec3 p(u(rng), u(rng), u(rng));
      const SurfacePoint fast = bvh.closestPoint(p);
      const SurfacePoint slow = closestPointBruteForce(m, p);
      EXPECT_NEAR(fast.distance, slow.distance, 1e-12);
      EXPECT_LT((fast.position - slow.position).norm(), 1e-9);
    }
  }
}

TEST(Winding, ClosedMeshValues) {
  const Mesh m = icosphere(2);
  EXPECT_NEAR(windingNumber(m, Vec3::Zero()), 1.0, 1e-9);
  EXPECT_NEAR(windingNumber(m, Vec3(3, 0, 0)), 0.0, 1e-9);
  const Mesh torus = testing::torusMesh(1.0, 0.3, 24, 12);
  EXPECT_NEAR(windingNumber(torus, Vec3(1.0, 0, 0)), 1.0, 1e-9);
  EXPECT_NEAR(windingNumber(torus, Vec3::Zero()), 0.0, 1e-9);
}

TEST(Winding, AgreesWithRayParityOnLShape) {
  const Mesh m = testing::lShapeMesh();
  std::mt19937_64 rng(3);
  const Points q = testing::sampleQueries(m, 200, 1e-3, rng);
  const InsideOutside io = classifyInside(m, q);
  std::vector<bool> inside(q.size(), false);
  for (int i : io.inside) inside[i] = true;
  for (size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(inside[i], testing::rayParityInside(m, q[i])) << i;
  }
}

TEST(Winding, OpenMeshGivesFractionalValue) {
  Mesh m = cubeMesh();
  m.faces.resize(10);  // remove the +x side
  const double w = windingNumber(m, Vec3::Zero());
  EXPECT_GT(w, 0.5);
  EXPECT_LT(w, 1.0);
}

TEST(Frames, OrthonormalOnUvMesh) {
  Mesh m = icosphere(2);
  std::vector<Vec2> uvs;
  for (const Vec3& v : m.vertices) uvs.emplace_back(std::atan2(v.y(), v.x()), v.z());
  m.uvs = uvs;
  const std::vector<LocalFrame> frames = vertexFrames(m);
  for (const LocalFrame& f : frames) {
    EXPECT_LT(frameOrthonormalityError(f), 1e-9);
  }
  const TriangleBvh bvh(m);
  const SurfacePoint sp = bvh.closestPoint(Vec3(0.3, 0.9, 0.2));
  EXPECT_LT(frameOrthonormalityError(interpolateFrame(m, frames, sp)), 1e-9);
}

TEST(Frames, MissingUvsRejected) { EXPECT_THROW(vertexFrames(cubeMesh()), Error); }

TEST(Frames, ParallelTangentFallsBack) {
  const LocalFrame f = LocalFrame::fromTangentNormal(Vec3(0, 0, 1), Vec3(0, 0, 1));
  EXPECT_LT(frameOrthonormalityError(f), 1e-12);
  EXPECT_NEAR(f.normal().z(), 1.0, 1e-12);
}

TEST(Metrics, UniformOffsetGivesExactV2v) {
  const Mesh m = icosphere(1);
  Points shifted = m.vertices;
  for (Vec3& v : shifted) v += Vec3(0.003, 0.004, 0.0);
  EXPECT_NEAR(v2vErrorMm(m.vertices, shifted), 5.0, 1e-9);
}

TEST(Metrics, IdenticalMeshesHaveZeroDistance) {
  const Mesh m = icosphere(2);
  EXPECT_EQ(v2vErrorMm(m.vertices, m.vertices), 0.0);
  EXPECT_EQ(chamferDistanceMm(m, m), 0.0);
}

TEST(Metrics, ChamferSymmetricAndRigidInvariant) {
  const Mesh a = testing::bumpySphere(1, 2);
  const Mesh b = testing::bumpySphere(2, 2);
  const double ab = chamferDistanceMm(a, b);
  EXPECT_DOUBLE_EQ(ab, chamferDistanceMm(b, a));
  std::mt19937_64 rng(5);
  const Mat3 r = testing::randomRotation(rng);
  const Vec3 t(0.3, -1.2, 2.0);
  Mesh ra = a, rb = b;
  for (Vec3& v : ra.vertices) v = r * v + t;
  for (Vec3& v : rb.vertices) v = r * v + t;
  EXPECT_NEAR(chamferDistanceMm(ra, rb), ab, 1e-9);
  EXPECT_NEAR(v2vErrorMm(ra.vertices, rb.vertices), v2vErrorMm(a.vertices, b.vertices), 1e-9);
}

TEST(Metrics, ConcentricSpheresChamfer) {
  // Vertices of each sphere lie on its own radius; the distance from a
  // vertex to the other (polyhedral) sphere is close to the radius gap.
  const Mesh a = icosphere(4, 1.0);
  const Mesh b = icosphere(4, 1.01);
  EXPECT_NEAR(chamferDistanceMm(a, b), 10.0, 0.1);
}

TEST(Metrics, V2vCountMismatchThrows) {
  const Mesh a = icosphere(1), b = icosphere(2);
  EXPECT_THROW(v2vErrorMm(a.vertices, b.vertices), Error);
}

TEST(SelfIntersection, DisjointAndCrossing) {
  EXPECT_EQ(countSelfIntersections(icosphere(2)), 0);
  Mesh two = cubeMesh(1.0);
  const Mesh other = cubeMesh(1.0, Vec3(0.5, 0.5, 0.5));
  const int base = two.numVertices();
  for (const Vec3& v : other.vertices) two.vertices.push_back(v);
  for (Face f : other.faces) {
    for (int& i : f) i += base;
    two.faces.push_back(f);
  }
  EXPECT_GT(countSelfIntersections(two), 0);
  EXPECT_TRUE(segmentCrossesTriangle(Vec3(0.2, 0.2, -1), Vec3(0.2, 0.2, 1), Vec3(0, 0, 0), Vec3(1, 0, 0),
                                     Vec3(0, 1, 0)));
}

}  // namespace
}  // namespace scanrig
