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

#include <filesystem>
#include <fstream>
#include <random>

#include "body/demo_body.hpp"
#include "common/error.hpp"
#include "io/json_formats.hpp"
#include "pipeline/synthetic.hpp"
#include "support/oracles.hpp"

namespace scanrig {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("scanrig_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Error message from loading `text` with `load`.
  template <typename F>
  std::string loadError(const std::string& text, F load) {
    const fs::path p = dir_ / "doc.json";
    std::ofstream(p) << text;
    try {
      load(p);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
      return e.what();
    }
    return "";
  }

  fs::path dir_;
};

TEST(JsonPath, DescribesNestedFields) {
  const JsonPath at = (JsonPath("scene.json") / "obstacles")[3] / "min";
  EXPECT_EQ(at.describe(), "scene.json: field 'obstacles[3].min'");
  try {
    at.fail("expected 3 entries");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("obstacles[3].min"), std::string::npos);
  }
}

TEST(JsonReaders, RejectWrongTypes) {
  const JsonPath at("x.json");
  EXPECT_THROW(readNumber(Json("1.0"), at), Error);
  EXPECT_THROW(readInt(Json(1.5), at), Error);
  EXPECT_THROW(readVec3(Json::array({1, 2}), at), Error);
  EXPECT_THROW(requireField(Json::object(), "a", at), Error);
  EXPECT_EQ(readVec3(Json::array({1, 2, 3}), at), Vec3(1, 2, 3));
  EXPECT_EQ(hashFromHex(hashToHex(0x0123456789abcdefULL), at), 0x0123456789abcdefULL);
  EXPECT_THROW(hashFromHex("xyz", at), Error);
}

TEST_F(IoTest, BodyRoundTrip) {
  const ParametricBody body = makeDemoBody();
  saveBody(dir_ / "body.json", body);
  const ParametricBody back = loadBody(dir_ / "body.json");
  EXPECT_EQ(back.rest_vertices, body.rest_vertices);
  EXPECT_EQ(back.faces, body.faces);
  EXPECT_EQ(back.parents, body.parents);
  EXPECT_EQ(back.joint_names, body.joint_names);
  EXPECT_EQ(back.skin_weights.toDense(), body.skin_weights.toDense());
  EXPECT_EQ(back.joint_regressor.toDense(), body.joint_regressor.toDense());
  ASSERT_EQ(back.numShapes(), body.numShapes());
  EXPECT_EQ(back.blendshapes[2], body.blendshapes[2]);
  // Byte-stable re-serialization.
  EXPECT_EQ(bodyToJson(back).dump(), bodyToJson(body).dump());
}

TEST_F(IoTest, BodyWithBrokenWeightsNamesTheProblem) {
  Json doc = bodyToJson(makeDemoBody());
  doc["parents"][3] = 3;
  const std::string msg = loadError(doc.dump(), loadBody);
  EXPECT_NE(msg.find("doc.json"), std::string::npos) << msg;
}

TEST_F(IoTest, KeypointsAndSkeletonRoundTrip) {
  const SyntheticSubject s = makeSyntheticSubject(makeDemoBody(), 3);
  const KeypointViews views = keypointViews(s);
  saveKeypoints(dir_ / "kp.json", views);
  const KeypointViews back = loadKeypoints(dir_ / "kp.json");
  ASSERT_EQ(back.size(), views.size());
  for (size_t c = 0; c < views.size(); ++c) {
    EXPECT_EQ(back[c].first.projection, views[c].first.projection);
    EXPECT_EQ(back[c].second.points, views[c].second.points);
  }
  Skeleton3D sk{s.truth.joints, std::vector<bool>(s.truth.joints.size(), true)};
  sk.valid[4] = false;
  saveSkeleton(dir_ / "sk.json", sk);
  const Skeleton3D sb = loadSkeleton(dir_ / "sk.json");
  EXPECT_EQ(sb.valid, sk.valid);
  EXPECT_EQ(sb.joints[0], sk.joints[0]);
}

TEST_F(IoTest, ClipAndSceneRoundTrip) {
  const ParametricBody body = makeDemoBody();
  const AnimationClip clip = makeWalkingClip(body.joint_names);
  saveClip(dir_ / "clip.json", clip);
  const AnimationClip back = loadClip(dir_ / "clip.json");
  ASSERT_EQ(back.frames.size(), clip.frames.size());
  EXPECT_EQ(back.fps, clip.fps);
  EXPECT_EQ(back.frames[7].joint_rotations, clip.frames[7].joint_rotations);
  EXPECT_EQ(back.frames[7].root_translation, clip.frames[7].root_translation);
  EXPECT_EQ(clipToJson(back).dump(), clipToJson(clip).dump());

  SceneLayout scene = demoRoom(true);
  scene.up_axis = 1;
  saveScene(dir_ / "scene.json", scene);
  const SceneLayout sb = loadScene(dir_ / "scene.json");
  EXPECT_EQ(sb.up_axis, 1);
  ASSERT_EQ(sb.obstacles.size(), scene.obstacles.size());
  EXPECT_EQ(sb.obstacles[1].max, scene.obstacles[1].max);
}

TEST_F(IoTest, SceneErrorsNameTheField) {
  const std::string inverted =
      R"({"format_version": 1, "kind": "scene", "up_axis": "z",
          "bounds": {"min": [0, 0, 0], "max": [10, 10, 3]},
          "obstacles": [{"min": [0, 0, 0], "max": [1, 1, 1]}, {"min": [2, 2, 2], "max": [1, 3, 3]}]})";
  std::string msg = loadError(inverted, loadScene);
  EXPECT_NE(msg.find("obstacles[1]"), std::string::npos) << msg;

  msg = loadError(R"({"format_version": 1, "kind": "scene", "up_axis": "w", "bounds": {}, "obstacles": []})",
                  loadScene);
  EXPECT_NE(msg.find("up_axis"), std::string::npos) << msg;

  msg = loadError(R"({"format_version": 1, "kind": "clip", "fps": 30, "frames": []})", loadScene);
  EXPECT_NE(msg.find("kind"), std::string::npos) << msg;

  msg = loadError("{ not json", loadScene);
  EXPECT_NE(msg.find("doc.json"), std::string::npos) << msg;
}

TEST_F(IoTest, AssetRoundTripChecksHash) {
  const ParametricBody body = makeDemoBody();
  const SyntheticSubject s = makeSyntheticSubject(body, 4);
  const RiggedAsset a = makeRestAsset(s.scan, body, s.theta, s.beta, s.beta);
  saveAsset(dir_ / "asset", a);
  const RiggedAsset back = loadAsset(dir_ / "asset");
  ASSERT_EQ(back.rest_mesh.numVertices(), a.rest_mesh.numVertices());
  double worst = 0.0;
  for (int i = 0; i < a.rest_mesh.numVertices(); ++i) {
    worst = std::max(worst, (back.rest_mesh.vertices[i] - a.rest_mesh.vertices[i]).norm());
  }
  EXPECT_LT(worst, 1e-7);
  EXPECT_EQ(back.parents, a.parents);
  EXPECT_LT(back.skin_weights.maxRowSumError(), 1e-9);

  // Editing the mesh behind the rig's back is detected.
  std::ofstream(dir_ / "asset" / "rest.obj", std::ios::app) << "v 0 0 0\n";
  EXPECT_THROW(loadAsset(dir_ / "asset"), Error);
}

TEST(FitConfigJson, PartialOverridesAndUnknownKeys) {
  const JsonPath at("cfg.json");
  const FitConfig cfg = fitConfigFromJson(Json::parse(R"({"lambda_o": 12.5, "max_outer_iterations": 7})"), at);
  EXPECT_EQ(cfg.lambda_o, 12.5);
  EXPECT_EQ(cfg.max_outer_iterations, 7);
  EXPECT_EQ(cfg.lambda_j, FitConfig{}.lambda_j);
  EXPECT_THROW(fitConfigFromJson(Json::parse(R"({"lambda_q": 1})"), at), Error);
  EXPECT_THROW(fitConfigFromJson(Json::parse(R"({"lambda_i": 30})"), at), Error);
  const FitConfig back = fitConfigFromJson(fitConfigToJson(cfg), at);
  EXPECT_EQ(fitConfigToJson(back).dump(), fitConfigToJson(cfg).dump());

  const CmaConfig c = cmaConfigFromJson(Json::parse(R"({"population": 12, "seed": 9})"), at);
  EXPECT_EQ(c.population, 12);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_THROW(cmaConfigFromJson(Json::parse(R"({"population": 2})"), at), Error);
}

TEST(PoseJson, RoundTrip) {
  std::mt19937_64 rng(1);
  const PoseParams p = testing::perturbedPose(24, rng, 0.3);
  const JsonPath at("pose");
  const PoseParams back = poseFromJson(poseToJson(p), at);
  EXPECT_EQ(back.global_rotation, p.global_rotation);
  EXPECT_EQ(back.translation, p.translation);
  EXPECT_EQ(back.joint_rotations, p.joint_rotations);
}

}  // namespace
}  // namespace scanrig
