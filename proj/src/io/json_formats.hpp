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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "body/body_model.hpp"
#include "fit/fit_body.hpp"
#include "fit/triangulate.hpp"
#include "place/cameras.hpp"
#include "place/place_sequences.hpp"
#include "retarget/rigged_asset.hpp"

namespace scanrig {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// Location inside a document, used in error messages as "file: field 'a.b[3]'".
class JsonPath {
 public:
  explicit JsonPath(std::string source) : source_(std::move(source)) {}
  JsonPath operator/(const std::string& key) const;
  JsonPath operator[](size_t index) const;
  std::string describe() const;
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::string source_;
  std::string path_;
};

// Parsing helpers. Each throws kInvalidInput naming the file and field.
const Json& requireField(const Json& obj, const std::string& key, const JsonPath& at);
double readNumber(const Json& j, const JsonPath& at);
int readInt(const Json& j, const JsonPath& at);
std::string readString(const Json& j, const JsonPath& at);
bool readBool(const Json& j, const JsonPath& at);
VecX readVector(const Json& j, const JsonPath& at, int expected_size = -1);
Vec2 readVec2(const Json& j, const JsonPath& at);
Vec3 readVec3(const Json& j, const JsonPath& at);
Rot6 readRot6(const Json& j, const JsonPath& at);
Mat3 readMat3(const Json& j, const JsonPath& at);
// Checks `kind` and `format_version`.
void checkHeader(const Json& doc, const std::string& kind, const JsonPath& at);

Json header(const std::string& kind);
Json toJson(const Vec3& v);
Json toJson(const VecX& v);
Json toJson(const Mat3& m);

Json readJsonFile(const std::filesystem::path& path);
// Two-space indented, trailing newline. Creates parent directories.
void writeJsonFile(const std::filesystem::path& path, const Json& doc);
void writeTextFile(const std::filesystem::path& path, const std::string& text);

std::string hashToHex(uint64_t hash);
uint64_t hashFromHex(const std::string& text, const JsonPath& at);

// Body model.
Json bodyToJson(const ParametricBody& body);
ParametricBody bodyFromJson(const Json& doc, const JsonPath& at);
ParametricBody loadBody(const std::filesystem::path& path);
void saveBody(const std::filesystem::path& path, const ParametricBody& body);

// Cameras with per-view 2D keypoints.
using KeypointViews = std::vector<std::pair<CameraView, Keypoints2D>>;
Json keypointsToJson(const KeypointViews& views);
KeypointViews keypointsFromJson(const Json& doc, const JsonPath& at);
KeypointViews loadKeypoints(const std::filesystem::path& path);
void saveKeypoints(const std::filesystem::path& path, const KeypointViews& views);

// 3D skeleton; invalid joints are stored as null.
struct Skeleton3D {
  Points joints;
  std::vector<bool> valid;
};
Json skeletonToJson(const Skeleton3D& s);
Skeleton3D loadSkeleton(const std::filesystem::path& path);
void saveSkeleton(const std::filesystem::path& path, const Skeleton3D& s);

Json poseToJson(const PoseParams& pose);
PoseParams poseFromJson(const Json& j, const JsonPath& at);

// Fit configuration; absent fields keep the values in `base`.
Json fitConfigToJson(const FitConfig& cfg);
FitConfig fitConfigFromJson(const Json& j, const JsonPath& at, FitConfig base = {});
Json cmaConfigToJson(const CmaConfig& cfg);
CmaConfig cmaConfigFromJson(const Json& j, const JsonPath& at, CmaConfig base = {});

// Fit results.
struct FitRecord {
  PoseParams theta;
  ShapeParams beta;
  uint64_t scan_hash = 0;
};
Json fitResultToJson(const FitResult& r, const FitConfig& cfg, uint64_t scan_hash);
FitRecord loadFitRecord(const std::filesystem::path& path);

// Rigged asset bundle directory: rest.obj plus rig.json.
void saveAsset(const std::filesystem::path& dir, const RiggedAsset& asset);
RiggedAsset loadAsset(const std::filesystem::path& dir);

Json clipToJson(const AnimationClip& clip);
AnimationClip clipFromJson(const Json& doc, const JsonPath& at);
AnimationClip loadClip(const std::filesystem::path& path);
void saveClip(const std::filesystem::path& path, const AnimationClip& clip);

Json sceneToJson(const SceneLayout& scene);
SceneLayout sceneFromJson(const Json& doc, const JsonPath& at);
SceneLayout loadScene(const std::filesystem::path& path);
void saveScene(const std::filesystem::path& path, const SceneLayout& scene);

Json aabbToJson(const Aabb& box);
Json placementLossToJson(const PlacementLoss& loss);
Json cameraToJson(const PinholeCamera& cam);

}  // namespace scanrig
