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
#include <numbers>
#include <random>

#include "body/demo_body.hpp"
#include "common/error.hpp"
#include "pipeline/synthetic.hpp"
#include "place/cameras.hpp"
#include "place/cma_es.hpp"
#include "place/motion_volume.hpp"
#include "place/place_sequences.hpp"
#include "place/placement_loss.hpp"
#include "support/shapes.hpp"

namespace scanrig {
namespace {

Aabb box(const Vec3& lo, const Vec3& hi) {
  Aabb b;
  b.min = lo;
  b.max = hi;
  return b;
}

MotionVolume staticVolume(const Aabb& b, int frames) {
  MotionVolume v;
  v.frames.assign(frames, b);
  return v;
}

SceneLayout room(double size) {
  SceneLayout s;
  s.bounds = box(Vec3(0, 0, 0), Vec3(size, size, 3));
  return s;
}

TEST(MotionVolume, StaticAndTranslatingCube) {
  const Mesh cube = testing::cubeMesh(0.5, Vec3(0.5, 0.5, 0.5));
  std::vector<Mesh> frames(10, cube);
  for (int f = 0; f < 10; ++f) {
    for (Vec3& v : frames[f].vertices) v.x() += 0.1 * f;
  }
  const MotionVolume mv = motionVolume(frames);
  ASSERT_EQ(mv.duration(), 10);
  for (int f = 0; f < 10; ++f) {
    EXPECT_NEAR(mv.frames[f].min.x(), 0.1 * f, 1e-12);
    EXPECT_NEAR(mv.frames[f].max.x(), 1.0 + 0.1 * f, 1e-12);
    EXPECT_EQ(mv.frames[f].min.y(), 0.0);
  }
  EXPECT_THROW(motionVolume(std::vector<Mesh>{}), Error);
}

TEST(MotionVolume, MatchesComponentwiseScan) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Points> frames(5);
  for (Points& f : frames) {
    for (int i = 0; i < 50; ++i) f.emplace_back(n(rng), n(rng), n(rng));
  }
  const MotionVolume mv = motionVolume(frames);
  for (int f = 0; f < 5; ++f) {
    for (int a = 0; a < 3; ++a) {
      double lo = 1e300, hi = -1e300;
      for (const Vec3& p : frames[f]) {
        lo = std::min(lo, p[a]);
        hi = std::max(hi, p[a]);
      }
      EXPECT_EQ(mv.frames[f].min[a], lo);
      EXPECT_EQ(mv.frames[f].max[a], hi);
    }
  }
}

TEST(PlaceBox, ZeroAndQuarterTurnYaw) {
  const Aabb b = box(Vec3(-0.2, -0.5, 0), Vec3(0.4, 0.3, 1.7));
  const Aabb same = placeBox(b, {}, 2);
  EXPECT_EQ(same.min, b.min);
  EXPECT_EQ(same.max, b.max);
  PlacementParams q;
  q.yaw = std::numbers::pi / 2;
  const Aabb r = placeBox(b, q, 2);
  const Vec3 e = b.max - b.min, er = r.max - r.min;
  EXPECT_EQ(er.x(), e.y());
  EXPECT_EQ(er.y(), e.x());
  EXPECT_EQ(er.z(), e.z());
  // Yaw about y for a y-up scene keeps the y extent.
  const Aabb ry = placeBox(b, q, 1);
  EXPECT_EQ((ry.max - ry.min).y(), e.y());
}

TEST(PlaceBox, PointAgreesWithBox) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int up = 0; up < 3; ++up) {
    for (int k = 0; k < 20; ++k) {
      const Vec3 p(u(rng), u(rng), u(rng));
      const PlacementParams params{Vec2(u(rng), u(rng)), u(rng)};
      const Vec3 q = placePoint(p, params, up);
      const Aabb b = placeBox(box(p, p), params, up);
      EXPECT_LT((b.min - q).norm(), 1e-12);
      EXPECT_LT((b.max - q).norm(), 1e-12);
      EXPECT_NEAR(q[up], p[up], 1e-15);
    }
  }
}

TEST(BoxOverlap, TouchingIsNotOverlap) {
  const Aabb a = box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  EXPECT_TRUE(boxesOverlap(a, box(Vec3(0.5, 0.5, 0.5), Vec3(2, 2, 2))));
  EXPECT_FALSE(boxesOverlap(a, box(Vec3(1, 0, 0), Vec3(2, 1, 1))));
  EXPECT_TRUE(boxInside(a, a));
  EXPECT_FALSE(boxInside(box(Vec3(0, 0, -0.01), Vec3(1, 1, 1)), a));
}

TEST(PlacementLoss, IdenticalVolumesCollideEveryFrame) {
  const SceneLayout s = room(10);
  const std::vector<MotionVolume> v(2, staticVolume(box(Vec3(4, 4, 0), Vec3(5, 5, 1.8)), 10));
  const std::vector<PlacementParams> p(2);
  const PlacementLoss l = placementLoss(s, v, p);
  EXPECT_EQ(l.collisions, 10);
  EXPECT_EQ(l.out_of_bounds, 0);
}

TEST(PlacementLoss, SeparatedVolumesAreFree) {
  const SceneLayout s = room(10);
  const std::vector<MotionVolume> v = {staticVolume(box(Vec3(1, 1, 0), Vec3(2, 2, 1.8)), 10),
                                       staticVolume(box(Vec3(6, 6, 0), Vec3(7, 7, 1.8)), 10)};
  const std::vector<PlacementParams> p(2);
  EXPECT_EQ(placementLoss(s, v, p).total(), 0);
  EXPECT_THROW(placementLoss(s, v, std::vector<PlacementParams>(1)), Error);
}

TEST(PlacementLoss, ShorterSequenceIsAbsentAfterItsEnd) {
  const SceneLayout s = room(10);
  const Aabb b = box(Vec3(4, 4, 0), Vec3(5, 5, 1.8));
  const std::vector<MotionVolume> v = {staticVolume(b, 10), staticVolume(b, 4)};
  EXPECT_EQ(placementLoss(s, v, std::vector<PlacementParams>(2)).collisions, 4);
}

TEST(PlacementLoss, ObstaclesAndBounds) {
  SceneLayout s = room(10);
  s.obstacles.push_back(box(Vec3(3, 3, 0), Vec3(4, 4, 1)));
  const std::vector<MotionVolume> v = {staticVolume(box(Vec3(3.5, 3.5, 0), Vec3(4.5, 4.5, 1.8)), 6),
                                       staticVolume(box(Vec3(9.5, 9.5, 0), Vec3(10.5, 10.5, 1.8)), 3)};
  const PlacementLoss l = placementLoss(s, v, std::vector<PlacementParams>(2));
  EXPECT_EQ(l.collisions, 6);
  EXPECT_EQ(l.out_of_bounds, 3);
}

// Random scenes, volumes and params for oracle comparisons.
struct RandomInstance {
  SceneLayout layout;
  std::vector<MotionVolume> volumes;
  std::vector<PlacementParams> params;
};

RandomInstance randomInstance(std::mt19937_64& rng, int people, int max_frames) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomInstance in;
  in.layout = room(6);
  in.layout.up_axis = static_cast<int>(rng() % 3);
  in.layout.bounds = box(Vec3(0, 0, 0), Vec3(6, 6, 6));
  for (int k = 0; k < 3; ++k) {
    const Vec3 lo(6 * u(rng), 6 * u(rng), 6 * u(rng));
    in.layout.obstacles.push_back(box(lo, lo + Vec3(u(rng), u(rng), u(rng))));
  }
  for (int i = 0; i < people; ++i) {
    MotionVolume mv;
    const int frames = 1 + static_cast<int>(rng() % max_frames);
    Vec3 c(u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5);
    for (int f = 0; f < frames; ++f) {
      c += 0.05 * Vec3(u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5);
      const Vec3 half(0.2 + 0.3 * u(rng), 0.2 + 0.3 * u(rng), 0.2 + 0.9 * u(rng));
      mv.frames.push_back(box(c - half, c + half));
    }
    in.volumes.push_back(mv);
    in.params.push_back({Vec2(6 * u(rng), 6 * u(rng)), 2 * std::numbers::pi * u(rng)});
  }
  return in;
}

TEST(PlacementLoss, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomInstance in = randomInstance(rng, 1 + trial % 8, 200);
    const PlacementLoss fast = placementLoss(in.layout, in.volumes, in.params);
    const PlacementLoss brute = bruteForcePlacementLoss(in.layout, in.volumes, in.params);
    EXPECT_EQ(fast, brute) << "trial " << trial;
  }
}

TEST(PlacementLoss, InvariantUnderCommonTranslation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    RandomInstance in = randomInstance(rng, 4, 30);
    in.layout.up_axis = 2;
    const PlacementLoss before = placementLoss(in.layout, in.volumes, in.params);
    // Shift by a power of two so the boxes move without rounding.
    const Vec2 shift(4.0, -8.0);
    const Vec3 shift3(shift.x(), shift.y(), 0.0);
    in.layout.bounds = box(in.layout.bounds.min + shift3, in.layout.bounds.max + shift3);
    for (Aabb& o : in.layout.obstacles) o = box(o.min + shift3, o.max + shift3);
    for (PlacementParams& p : in.params) p.translation += shift;
    EXPECT_EQ(placementLoss(in.layout, in.volumes, in.params), before);
  }
}

TEST(PlacementLoss, VoxelCheckerIsConservativeForPeople) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance in = randomInstance(rng, 5, 20);
    const PlacementLoss box_loss = placementLoss(in.layout, in.volumes, in.params);
    const PlacementLoss voxel = voxelPlacementLoss(in.layout, in.volumes, in.params, 0.25);
    EXPECT_EQ(voxel.out_of_bounds, box_loss.out_of_bounds);
    EXPECT_GE(voxel.collisions, box_loss.collisions);
  }
}

double sphere(const VecX& x) { return x.squaredNorm(); }

double rosenbrock(const VecX& x) {
  double f = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    f += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
  }
  return f;
}

TEST(Cma, Sphere3D) {
  CmaConfig cfg;
  cfg.sigma0 = 0.5;
  cfg.max_generations = 200;
  cfg.restarts = 0;
  cfg.target = 1e-10;
  const CmaResult r = cmaMinimize(sphere, Vec3(1, 1, 1), cfg);
  EXPECT_LT(r.f_best, 1e-8);
  EXPECT_LE(r.generations, 200);
}

TEST(Cma, StepSizeShrinksOnSphere) {
  CmaConfig cfg;
  cfg.sigma0 = 0.5;
  cfg.max_generations = 100;
  cfg.restarts = 0;
  const CmaResult r = cmaMinimize(sphere, Vec3(1, 1, 1), cfg);
  std::vector<double> medians;
  for (size_t s = 0; s + 10 <= r.sigma_history.size(); s += 10) {
    std::vector<double> w(r.sigma_history.begin() + s, r.sigma_history.begin() + s + 10);
    std::nth_element(w.begin(), w.begin() + 5, w.end());
    medians.push_back(w[5]);
  }
  ASSERT_GE(medians.size(), 5u);
  for (size_t k = 1; k < medians.size(); ++k) EXPECT_LT(medians[k], medians[k - 1]);
}

TEST(Cma, Rosenbrock5D) {
  CmaConfig cfg;
  cfg.sigma0 = 0.5;
  cfg.max_generations = 2000;
  cfg.restarts = 2;
  cfg.target = 1e-6;
  const CmaResult r = cmaMinimize(rosenbrock, VecX::Zero(5), cfg);
  EXPECT_LT(r.f_best, 1e-4);
}

TEST(Cma, SeededRunsAreIdentical) {
  CmaConfig cfg;
  cfg.seed = 42;
  cfg.max_generations = 150;
  cfg.restarts = 1;
  const CmaResult a = cmaMinimize(rosenbrock, VecX::Zero(4), cfg);
  const CmaResult b = cmaMinimize(rosenbrock, VecX::Zero(4), cfg);
  EXPECT_EQ(a.f_best, b.f_best);
  EXPECT_EQ(a.x_best, b.x_best);
  EXPECT_EQ(a.sigma_history, b.sigma_history);
  cfg.seed = 43;
  EXPECT_NE(cmaMinimize(rosenbrock, VecX::Zero(4), cfg).sigma_history, a.sigma_history);
}

TEST(Cma, NonFiniteStartOrBadConfig) {
  CmaConfig cfg;
  const Objective nan = [](const VecX&) { return std::nan(""); };
  EXPECT_THROW(cmaMinimize(nan, VecX::Zero(2), cfg), Error);
  cfg.population = 3;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.population = 0;
  cfg.sigma0 = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(PlaceSequences, SingleSmallVolumeInHugeScene) {
  const SceneLayout s = room(100);
  const std::vector<MotionVolume> v = {staticVolume(box(Vec3(0, 0, 0), Vec3(0.5, 0.5, 1.8)), 5)};
  const PlacementOutcome out = placeSequences(s, v);
  EXPECT_TRUE(out.success);
  EXPECT_EQ(out.verified_loss.total(), 0);
  EXPECT_EQ(out.generations, 0);
}

TEST(PlaceSequences, InfeasibleSceneReportsFailure) {
  SceneLayout s;
  s.bounds = box(Vec3(0, 0, 0), Vec3(0.5, 0.5, 3));
  const std::vector<MotionVolume> v(2, staticVolume(box(Vec3(0, 0, 0), Vec3(1, 1, 1)), 5));
  PlacementOptions opts = PlacementOptions::defaults();
  opts.cma.max_generations = 50;
  opts.cma.restarts = 1;
  const PlacementOutcome out = placeSequences(s, v, opts);
  EXPECT_FALSE(out.success);
  EXPECT_GT(out.loss.out_of_bounds, 0);
  EXPECT_EQ(out.loss, out.verified_loss);
}

TEST(PlaceSequences, WalkersInDemoRoom) {
  const ParametricBody body = makeDemoBody();
  const RiggedAsset asset = makeRestAsset(body.restMesh(), body, PoseParams::identity(body.numJoints()),
                                          ShapeParams::zero(body.numShapes()), ShapeParams::zero(body.numShapes()));
  std::vector<MotionVolume> volumes;
  for (int i = 0; i < 5; ++i) {
    WalkOptions w;
    w.speed = 1.0 + 0.1 * i;
    w.phase = 0.7 * i;
    const std::vector<Mesh> frames = animateAsset(asset, makeWalkingClip(body.joint_names, w));
    volumes.push_back(motionVolume(frames));
    // Feet stay above the room floor.
    for (const Aabb& b : volumes.back().frames) EXPECT_GT(b.min.z(), -0.1);
  }
  const SceneLayout scene = demoRoom();
  for (uint64_t seed = 1; seed <= 2; ++seed) {
    PlacementOptions opts = PlacementOptions::defaults();
    opts.cma.seed = seed;
    const PlacementOutcome out = placeSequences(scene, volumes, opts);
    EXPECT_TRUE(out.success) << "seed " << seed;
    EXPECT_EQ(bruteForcePlacementLoss(scene, volumes, out.params).total(), 0);
  }
}

TEST(Cameras, CornerRig) {
  const std::vector<PinholeCamera> cams = cornerCameras(Vec2(0, 0), 5.0, {2.0, 2.0, 2.0, 2.0});
  ASSERT_EQ(cams.size(), 4u);
  for (const PinholeCamera& c : cams) {
    EXPECT_NEAR(std::abs(c.center().x()), 5.0, 1e-12);
    EXPECT_NEAR(std::abs(c.center().y()), 5.0, 1e-12);
    EXPECT_NEAR(c.center().z(), 2.0, 1e-12);
    const Vec2 px = c.view().project(Vec3(0, 0, 1.0));
    EXPECT_LT((px - Vec2(c.intrinsics(0, 2), c.intrinsics(1, 2))).norm(), 1.0);
    // The optical axis meets the vertical through the center at the aim height.
    const Vec3 axis = c.rotation.row(2).transpose();
    const double t = -c.center().x() / axis.x();
    EXPECT_NEAR((c.center() + t * axis).z(), 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace scanrig
