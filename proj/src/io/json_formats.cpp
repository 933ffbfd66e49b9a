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

#include "io/json_formats.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "geom/obj_io.hpp"

namespace scanrig {

namespace fs = std::filesystem;

JsonPath JsonPath::operator/(const std::string& key) const {
  JsonPath p = *this;
  p.path_ += p.path_.empty() ? key : "." + key;
  return p;
}

JsonPath JsonPath::operator[](size_t index) const {
  JsonPath p = *this;
  p.path_ += "[" + std::to_string(index) + "]";
  return p;
}

std::string JsonPath::describe() const {
  return path_.empty() ? source_ : source_ + ": field '" + path_ + "'";
}

void JsonPath::fail(const std::string& what) const { throwInvalid(describe() + ": " + what); }

const Json& requireField(const Json& obj, const std::string& key, const JsonPath& at) {
  if (!obj.is_object()) {
    at.fail("expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    (at / key).fail("missing");
  }
  return *it;
}

double readNumber(const Json& j, const JsonPath& at) {
  if (!j.is_number()) {
    at.fail("expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    at.fail("not finite");
  }
  return v;
}

int readInt(const Json& j, const JsonPath& at) {
  if (!j.is_number_integer()) {
    at.fail("expected an integer");
  }
  const int64_t v = j.get<int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) {
    at.fail("integer out of range");
  }
  return static_cast<int>(v);
}

std::string readString(const Json& j, const JsonPath& at) {
  if (!j.is_string()) {
    at.fail("expected a string");
  }
  return j.get<std::string>();
}

bool readBool(const Json& j, const JsonPath& at) {
  if (!j.is_boolean()) {
    at.fail("expected true or false");
  }
  return j.get<bool>();
}

static const Json& requireArray(const Json& j, const JsonPath& at, int expected_size = -1) {
  if (!j.is_array()) {
    at.fail("expected an array");
  }
  if (expected_size >= 0 && static_cast<int>(j.size()) != expected_size) {
    at.fail("expected " + std::to_string(expected_size) + " entries, got " + std::to_string(j.size()));
  }
  return j;
}

VecX readVector(const Json& j, const JsonPath& at, int expected_size) {
  requireArray(j, at, expected_size);
  VecX v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[i] = readNumber(j[i], at[i]);
  }
  return v;
}

Vec2 readVec2(const Json& j, const JsonPath& at) { return readVector(j, at, 2); }
Vec3 readVec3(const Json& j, const JsonPath& at) { return readVector(j, at, 3); }
Rot6 readRot6(const Json& j, const JsonPath& at) { return readVector(j, at, 6); }

Mat3 readMat3(const Json& j, const JsonPath& at) {
  requireArray(j, at, 3);
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    m.row(r) = readVec3(j[r], at[r]).transpose();
  }
  return m;
}

static Points readPoints(const Json& j, const JsonPath& at, int expected_size = -1) {
  requireArray(j, at, expected_size);
  Points pts(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    pts[i] = readVec3(j[i], at[i]);
  }
  return pts;
}

static Json pointsToJson(const Points& pts) {
  Json a = Json::array();
  for (const Vec3& p : pts) {
    a.push_back(toJson(p));
  }
  return a;
}

void checkHeader(const Json& doc, const std::string& kind, const JsonPath& at) {
  const std::string got = readString(requireField(doc, "kind", at), at / "kind");
  if (got != kind) {
    (at / "kind").fail("expected '" + kind + "', got '" + got + "'");
  }
  const int version = readInt(requireField(doc, "format_version", at), at / "format_version");
  if (version != kFormatVersion) {
    (at / "format_version").fail("unsupported version " + std::to_string(version));
  }
}

Json header(const std::string& kind) {
  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  return j;
}

Json toJson(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json toJson(const VecX& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

Json toJson(const Mat3& m) {
  return Json::array({toJson(Vec3(m.row(0).transpose())), toJson(Vec3(m.row(1).transpose())),
                      toJson(Vec3(m.row(2).transpose()))});
}

Json readJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throwInvalid("cannot open " + path.string());
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throwInvalid(path.string() + ": malformed JSON: " + e.what());
  }
}

void writeTextFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error(ErrorCode::kInternal, "cannot write " + path.string());
  }
}

void writeJsonFile(const fs::path& path, const Json& doc) { writeTextFile(path, doc.dump(2) + "\n"); }

std::string hashToHex(uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

uint64_t hashFromHex(const std::string& text, const JsonPath& at) {
  if (text.size() != 16 || text.find_first_not_of("0123456789abcdef") != std::string::npos) {
    at.fail("expected 16 lowercase hex digits");
  }
  return std::stoull(text, nullptr, 16);
}

// Sparse rows as [[col, value], ...] per row.
static Json sparseToJson(const SparseRows& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (const auto& e : m.row(r)) {
      row.push_back(Json::array({e.col, e.value}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

static SparseRows sparseFromJson(const Json& j, int cols, const JsonPath& at) {
  requireArray(j, at);
  SparseRows m(cols);
  std::vector<SparseRows::Entry> entries;
  for (size_t r = 0; r < j.size(); ++r) {
    const JsonPath rp = at[r];
    requireArray(j[r], rp);
    entries.clear();
    for (size_t k = 0; k < j[r].size(); ++k) {
      const JsonPath ep = rp[k];
      requireArray(j[r][k], ep, 2);
      const int col = readInt(j[r][k][0], ep[0]);
      if (col < 0 || col >= cols) {
        ep[0].fail("column " + std::to_string(col) + " out of range");
      }
      entries.push_back({col, readNumber(j[r][k][1], ep[1])});
    }
    m.appendRow(entries);
  }
  return m;
}

static Json facesToJson(const std::vector<Face>& faces) {
  Json a = Json::array();
  for (const Face& f : faces) {
    a.push_back(Json::array({f[0], f[1], f[2]}));
  }
  return a;
}

static std::vector<Face> facesFromJson(const Json& j, int num_vertices, const JsonPath& at) {
  requireArray(j, at);
  std::vector<Face> faces(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    requireArray(j[i], at[i], 3);
    for (int k = 0; k < 3; ++k) {
      const int v = readInt(j[i][k], at[i][k]);
      if (v < 0 || v >= num_vertices) {
        at[i][k].fail("vertex index out of range");
      }
      faces[i][k] = v;
    }
  }
  return faces;
}

static std::vector<std::string> readStrings(const Json& j, const JsonPath& at, int expected_size = -1) {
  requireArray(j, at, expected_size);
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(readString(j[i], at[i]));
  }
  return out;
}

static std::vector<int> readInts(const Json& j, const JsonPath& at, int expected_size = -1) {
  requireArray(j, at, expected_size);
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(readInt(j[i], at[i]));
  }
  return out;
}

Json bodyToJson(const ParametricBody& body) {
  Json j = header("body");
  j["num_vertices"] = body.numVertices();
  j["num_joints"] = body.numJoints();
  j["num_shapes"] = body.numShapes();
  j["joint_names"] = body.joint_names;
  j["parents"] = body.parents;
  j["rest_vertices"] = pointsToJson(body.rest_vertices);
  j["faces"] = facesToJson(body.faces);
  Json uvs = Json::array();
  for (const Vec2& uv : body.uvs) {
    uvs.push_back(Json::array({uv.x(), uv.y()}));
  }
  j["uvs"] = std::move(uvs);
  Json shapes = Json::array();
  for (const Points& s : body.blendshapes) {
    shapes.push_back(pointsToJson(s));
  }
  j["blendshapes"] = std::move(shapes);
  j["joint_regressor"] = sparseToJson(body.joint_regressor);
  j["skin_weights"] = sparseToJson(body.skin_weights);
  return j;
}

ParametricBody bodyFromJson(const Json& doc, const JsonPath& at) {
  checkHeader(doc, "body", at);
  ParametricBody body;
  body.rest_vertices = readPoints(requireField(doc, "rest_vertices", at), at / "rest_vertices");
  const int n = body.numVertices();
  body.faces = facesFromJson(requireField(doc, "faces", at), n, at / "faces");
  const Json& uvs = requireArray(requireField(doc, "uvs", at), at / "uvs");
  if (!uvs.empty()) {
    requireArray(uvs, at / "uvs", n);
    for (size_t i = 0; i < uvs.size(); ++i) {
      body.uvs.push_back(readVec2(uvs[i], (at / "uvs")[i]));
    }
  }
  body.parents = readInts(requireField(doc, "parents", at), at / "parents");
  const int nj = body.numJoints();
  body.joint_names = readStrings(requireField(doc, "joint_names", at), at / "joint_names", nj);
  const Json& shapes = requireArray(requireField(doc, "blendshapes", at), at / "blendshapes");
  for (size_t s = 0; s < shapes.size(); ++s) {
    body.blendshapes.push_back(readPoints(shapes[s], (at / "blendshapes")[s], n));
  }
  body.joint_regressor = sparseFromJson(requireField(doc, "joint_regressor", at), n, at / "joint_regressor");
  body.skin_weights = sparseFromJson(requireField(doc, "skin_weights", at), nj, at / "skin_weights");
  try {
    validateBody(body);
  } catch (const Error& e) {
    at.fail(e.what());
  }
  return body;
}

ParametricBody loadBody(const fs::path& path) { return bodyFromJson(readJsonFile(path), JsonPath(path.string())); }

void saveBody(const fs::path& path, const ParametricBody& body) { writeJsonFile(path, bodyToJson(body)); }

Json keypointsToJson(const KeypointViews& views) {
  Json j = header("keypoints");
  Json cams = Json::array();
  for (const auto& [view, kp] : views) {
    Json c = Json::object();
    Json p = Json::array();
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 4; ++k) {
        p.push_back(view.projection(r, k));
      }
    }
    c["projection"] = std::move(p);
    c["keypoints"] = pointsToJson(kp.points);
    cams.push_back(std::move(c));
  }
  j["cameras"] = std::move(cams);
  return j;
}

KeypointViews keypointsFromJson(const Json& doc, const JsonPath& at) {
  checkHeader(doc, "keypoints", at);
  const JsonPath cp = at / "cameras";
  const Json& cams = requireArray(requireField(doc, "cameras", at), cp);
  KeypointViews views;
  size_t num_joints = 0;
  for (size_t i = 0; i < cams.size(); ++i) {
    const VecX p = readVector(requireField(cams[i], "projection", cp[i]), cp[i] / "projection", 12);
    CameraView view;
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 4; ++k) {
        view.projection(r, k) = p[4 * r + k];
      }
    }
    try {
      view.validate();
    } catch (const Error& e) {
      (cp[i] / "projection").fail(e.what());
    }
    Keypoints2D kp{readPoints(requireField(cams[i], "keypoints", cp[i]), cp[i] / "keypoints")};
    if (i == 0) {
      num_joints = kp.points.size();
    } else if (kp.points.size() != num_joints) {
      (cp[i] / "keypoints").fail("joint count differs from the first camera");
    }
    for (size_t k = 0; k < kp.points.size(); ++k) {
      if (kp.points[k].z() < 0.0) {
        (cp[i] / "keypoints")[k][2].fail("negative confidence");
      }
    }
    views.emplace_back(view, std::move(kp));
  }
  return views;
}

KeypointViews loadKeypoints(const fs::path& path) {
  return keypointsFromJson(readJsonFile(path), JsonPath(path.string()));
}

void saveKeypoints(const fs::path& path, const KeypointViews& views) { writeJsonFile(path, keypointsToJson(views)); }

Json skeletonToJson(const Skeleton3D& s) {
  Json j = header("skeleton");
  Json joints = Json::array();
  for (size_t i = 0; i < s.joints.size(); ++i) {
    joints.push_back(s.valid[i] ? toJson(s.joints[i]) : Json(nullptr));
  }
  j["joints"] = std::move(joints);
  return j;
}

Skeleton3D loadSkeleton(const fs::path& path) {
  const Json doc = readJsonFile(path);
  const JsonPath at(path.string());
  checkHeader(doc, "skeleton", at);
  const Json& joints = requireArray(requireField(doc, "joints", at), at / "joints");
  Skeleton3D s;
  for (size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].is_null()) {
      s.joints.push_back(Vec3::Constant(std::nan("")));
      s.valid.push_back(false);
    } else {
      s.joints.push_back(readVec3(joints[i], (at / "joints")[i]));
      s.valid.push_back(true);
    }
  }
  return s;
}

void saveSkeleton(const fs::path& path, const Skeleton3D& s) { writeJsonFile(path, skeletonToJson(s)); }

Json poseToJson(const PoseParams& pose) {
  Json j = Json::object();
  j["global_rotation"] = toJson(VecX(pose.global_rotation));
  j["translation"] = toJson(pose.translation);
  Json rots = Json::array();
  for (const Rot6& r : pose.joint_rotations) {
    rots.push_back(toJson(VecX(r)));
  }
  j["joint_rotations"] = std::move(rots);
  return j;
}

PoseParams poseFromJson(const Json& j, const JsonPath& at) {
  PoseParams pose;
  pose.global_rotation = readRot6(requireField(j, "global_rotation", at), at / "global_rotation");
  pose.translation = readVec3(requireField(j, "translation", at), at / "translation");
  const Json& rots = requireArray(requireField(j, "joint_rotations", at), at / "joint_rotations");
  for (size_t i = 0; i < rots.size(); ++i) {
    pose.joint_rotations.push_back(readRot6(rots[i], (at / "joint_rotations")[i]));
  }
  return pose;
}

Json fitConfigToJson(const FitConfig& cfg) {
  Json j = Json::object();
  j["lambda_j"] = cfg.lambda_j;
  j["lambda_i"] = cfg.lambda_i;
  j["lambda_o"] = cfg.lambda_o;
  j["w_theta"] = cfg.w_theta;
  j["w_beta"] = cfg.w_beta;
  j["max_outer_iterations"] = cfg.max_outer_iterations;
  j["inner_steps"] = cfg.inner_steps;
  j["tolerance"] = cfg.tolerance;
  j["stage_a_iterations"] = cfg.stage_a_iterations;
  j["closest_mode"] = toString(cfg.closest_mode);
  j["allow_mesh_only"] = cfg.allow_mesh_only;
  return j;
}

FitConfig fitConfigFromJson(const Json& j, const JsonPath& at, FitConfig cfg) {
  if (!j.is_object()) {
    at.fail("expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    const JsonPath p = at / key;
    if (key == "lambda_j") {
      cfg.lambda_j = readNumber(value, p);
    } else if (key == "lambda_i") {
      cfg.lambda_i = readNumber(value, p);
    } else if (key == "lambda_o") {
      cfg.lambda_o = readNumber(value, p);
    } else if (key == "w_theta") {
      cfg.w_theta = readNumber(value, p);
    } else if (key == "w_beta") {
      cfg.w_beta = readNumber(value, p);
    } else if (key == "max_outer_iterations") {
      cfg.max_outer_iterations = readInt(value, p);
    } else if (key == "inner_steps") {
      cfg.inner_steps = readInt(value, p);
    } else if (key == "tolerance") {
      cfg.tolerance = readNumber(value, p);
    } else if (key == "stage_a_iterations") {
      cfg.stage_a_iterations = readInt(value, p);
    } else if (key == "closest_mode") {
      try {
        cfg.closest_mode = closestPointModeFromString(readString(value, p));
      } catch (const Error& e) {
        p.fail(e.what());
      }
    } else if (key == "allow_mesh_only") {
      cfg.allow_mesh_only = readBool(value, p);
    } else {
      p.fail("unknown key");
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    at.fail(e.what());
  }
  return cfg;
}

Json cmaConfigToJson(const CmaConfig& cfg) {
  Json j = Json::object();
  j["population"] = cfg.population;
  j["sigma0"] = cfg.sigma0;
  j["max_generations"] = cfg.max_generations;
  j["restarts"] = cfg.restarts;
  j["seed"] = cfg.seed;
  return j;
}

CmaConfig cmaConfigFromJson(const Json& j, const JsonPath& at, CmaConfig cfg) {
  if (!j.is_object()) {
    at.fail("expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    const JsonPath p = at / key;
    if (key == "population") {
      cfg.population = readInt(value, p);
    } else if (key == "sigma0") {
      cfg.sigma0 = readNumber(value, p);
    } else if (key == "max_generations") {
      cfg.max_generations = readInt(value, p);
    } else if (key == "restarts") {
      cfg.restarts = readInt(value, p);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        p.fail("expected a nonnegative integer");
      }
      cfg.seed = value.get<uint64_t>();
    } else {
      p.fail("unknown key");
    }
  }
  if (cfg.max_generations <= 0) {
    (at / "max_generations").fail("must be positive");
  }
  if (cfg.restarts < 0) {
    (at / "restarts").fail("must be nonnegative");
  }
  if (cfg.population != 0 && cfg.population < 4) {
    (at / "population").fail("must be 0 (automatic) or at least 4");
  }
  return cfg;
}

static Json traceToJson(const std::vector<double>& trace) {
  Json a = Json::array();
  for (double v : trace) {
    a.push_back(v);
  }
  return a;
}

static Json numberOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json fitResultToJson(const FitResult& r, const FitConfig& cfg, uint64_t scan_hash) {
  Json j = header("fit_result");
  j["scan_hash"] = hashToHex(scan_hash);
  j["theta"] = poseToJson(r.theta);
  j["beta"] = toJson(r.beta.beta);
  Json losses = Json::object();
  losses["joint"] = numberOrNull(r.joint_loss);
  losses["mesh"] = r.mesh_loss;
  losses["prior"] = r.prior.total();
  losses["objective"] = r.objective;
  j["losses"] = std::move(losses);
  j["stage_a_trace"] = traceToJson(r.stage_a_trace);
  j["objective_trace"] = traceToJson(r.objective_trace);
  j["refreshed_trace"] = traceToJson(r.refreshed_trace);
  j["outer_iterations"] = r.outer_iterations;
  Json d = Json::object();
  d["num_inside"] = r.num_inside;
  d["num_outside"] = r.num_outside;
  d["inside_fraction"] = numberOrNull(r.inside_fraction);
  d["chamfer_mm"] = numberOrNull(r.chamfer_mm);
  d["v2v_mm"] = r.v2v_mm ? Json(*r.v2v_mm) : Json(nullptr);
  j["diagnostics"] = std::move(d);
  j["config"] = fitConfigToJson(cfg);
  return j;
}

FitRecord loadFitRecord(const fs::path& path) {
  const Json doc = readJsonFile(path);
  const JsonPath at(path.string());
  checkHeader(doc, "fit_result", at);
  FitRecord rec;
  rec.theta = poseFromJson(requireField(doc, "theta", at), at / "theta");
  rec.beta.beta = readVector(requireField(doc, "beta", at), at / "beta");
  rec.scan_hash = hashFromHex(readString(requireField(doc, "scan_hash", at), at / "scan_hash"), at / "scan_hash");
  return rec;
}

void saveAsset(const fs::path& dir, const RiggedAsset& asset) {
  fs::create_directories(dir);
  // The hash covers the mesh as it reads back, after OBJ rounding.
  std::ostringstream obj;
  writeObj(obj, asset.rest_mesh);
  std::istringstream reread(obj.str());
  const uint64_t mesh_hash = contentHash(readObj(reread, "rest.obj"));
  writeTextFile(dir / "rest.obj", obj.str());
  Json j = header("rig");
  j["mesh"] = "rest.obj";
  j["mesh_hash"] = hashToHex(mesh_hash);
  j["joint_names"] = asset.joint_names;
  j["parents"] = asset.parents;
  j["rest_joints"] = pointsToJson(asset.rest_joints);
  j["shape"] = toJson(asset.shape_tag.beta);
  j["skin_weights"] = sparseToJson(asset.skin_weights);
  writeJsonFile(dir / "rig.json", j);
}

RiggedAsset loadAsset(const fs::path& dir) {
  const fs::path rig_path = dir / "rig.json";
  const Json doc = readJsonFile(rig_path);
  const JsonPath at(rig_path.string());
  checkHeader(doc, "rig", at);
  RiggedAsset asset;
  const std::string mesh_name = readString(requireField(doc, "mesh", at), at / "mesh");
  asset.rest_mesh = loadObj((dir / mesh_name).string());
  const uint64_t expected = hashFromHex(readString(requireField(doc, "mesh_hash", at), at / "mesh_hash"), at / "mesh_hash");
  if (contentHash(asset.rest_mesh) != expected) {
    (at / "mesh_hash").fail("does not match " + mesh_name);
  }
  asset.parents = readInts(requireField(doc, "parents", at), at / "parents");
  const int nj = asset.numJoints();
  asset.joint_names = readStrings(requireField(doc, "joint_names", at), at / "joint_names", nj);
  asset.rest_joints = readPoints(requireField(doc, "rest_joints", at), at / "rest_joints", nj);
  asset.shape_tag.beta = readVector(requireField(doc, "shape", at), at / "shape");
  asset.skin_weights = sparseFromJson(requireField(doc, "skin_weights", at), nj, at / "skin_weights");
  try {
    asset.validate();
  } catch (const Error& e) {
    at.fail(e.what());
  }
  return asset;
}

Json clipToJson(const AnimationClip& clip) {
  Json j = header("clip");
  j["fps"] = clip.fps;
  Json frames = Json::array();
  for (const ClipFrame& f : clip.frames) {
    Json fj = Json::object();
    fj["root_translation"] = toJson(f.root_translation);
    fj["global_rotation"] = toJson(VecX(f.global_rotation));
    Json rots = Json::array();
    for (const Rot6& r : f.joint_rotations) {
      rots.push_back(toJson(VecX(r)));
    }
    fj["joint_rotations"] = std::move(rots);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return j;
}

AnimationClip clipFromJson(const Json& doc, const JsonPath& at) {
  checkHeader(doc, "clip", at);
  AnimationClip clip;
  clip.fps = readNumber(requireField(doc, "fps", at), at / "fps");
  if (clip.fps <= 0.0) {
    (at / "fps").fail("must be positive");
  }
  const JsonPath fp = at / "frames";
  const Json& frames = requireArray(requireField(doc, "frames", at), fp);
  if (frames.empty()) {
    fp.fail("clip has no frames");
  }
  for (size_t i = 0; i < frames.size(); ++i) {
    const JsonPath p = fp[i];
    ClipFrame f;
    f.root_translation = readVec3(requireField(frames[i], "root_translation", p), p / "root_translation");
    if (frames[i].contains("global_rotation")) {
      f.global_rotation = readRot6(frames[i]["global_rotation"], p / "global_rotation");
    }
    const Json& rots = requireArray(requireField(frames[i], "joint_rotations", p), p / "joint_rotations");
    for (size_t k = 0; k < rots.size(); ++k) {
      f.joint_rotations.push_back(readRot6(rots[k], (p / "joint_rotations")[k]));
    }
    if (i > 0 && f.joint_rotations.size() != clip.frames[0].joint_rotations.size()) {
      (p / "joint_rotations").fail("joint count differs from frame 0");
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

AnimationClip loadClip(const fs::path& path) { return clipFromJson(readJsonFile(path), JsonPath(path.string())); }

void saveClip(const fs::path& path, const AnimationClip& clip) { writeJsonFile(path, clipToJson(clip)); }

Json aabbToJson(const Aabb& box) {
  Json j = Json::object();
  j["min"] = toJson(box.min);
  j["max"] = toJson(box.max);
  return j;
}

static Aabb aabbFromJson(const Json& j, const JsonPath& at) {
  Aabb box;
  box.min = readVec3(requireField(j, "min", at), at / "min");
  box.max = readVec3(requireField(j, "max", at), at / "max");
  if (!(box.min.array() <= box.max.array()).all()) {
    at.fail("min exceeds max");
  }
  return box;
}

Json sceneToJson(const SceneLayout& scene) {
  Json j = header("scene");
  static const char* kAxes[] = {"x", "y", "z"};
  j["up_axis"] = kAxes[scene.up_axis];
  j["bounds"] = aabbToJson(scene.bounds);
  Json obs = Json::array();
  for (const Aabb& b : scene.obstacles) {
    obs.push_back(aabbToJson(b));
  }
  j["obstacles"] = std::move(obs);
  return j;
}

SceneLayout sceneFromJson(const Json& doc, const JsonPath& at) {
  checkHeader(doc, "scene", at);
  SceneLayout scene;
  const std::string up = readString(requireField(doc, "up_axis", at), at / "up_axis");
  if (up == "x") {
    scene.up_axis = 0;
  } else if (up == "y") {
    scene.up_axis = 1;
  } else if (up == "z") {
    scene.up_axis = 2;
  } else {
    (at / "up_axis").fail("expected \"x\", \"y\" or \"z\"");
  }
  scene.bounds = aabbFromJson(requireField(doc, "bounds", at), at / "bounds");
  const Json& obs = requireArray(requireField(doc, "obstacles", at), at / "obstacles");
  for (size_t i = 0; i < obs.size(); ++i) {
    scene.obstacles.push_back(aabbFromJson(obs[i], (at / "obstacles")[i]));
  }
  try {
    scene.validate();
  } catch (const Error& e) {
    at.fail(e.what());
  }
  return scene;
}

SceneLayout loadScene(const fs::path& path) { return sceneFromJson(readJsonFile(path), JsonPath(path.string())); }

void saveScene(const fs::path& path, const SceneLayout& scene) { writeJsonFile(path, sceneToJson(scene)); }

Json placementLossToJson(const PlacementLoss& loss) {
  Json j = Json::object();
  j["collisions"] = loss.collisions;
  j["out_of_bounds"] = loss.out_of_bounds;
  j["total"] = loss.total();
  return j;
}

Json cameraToJson(const PinholeCamera& cam) {
  Json j = Json::object();
  j["width"] = cam.width;
  j["height"] = cam.height;
  j["K"] = toJson(cam.intrinsics);
  j["R"] = toJson(cam.rotation);
  j["t"] = toJson(cam.translation);
  return j;
}

}  // namespace scanrig
