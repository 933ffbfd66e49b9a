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

#include "pipeline/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "body/demo_body.hpp"
#include "body/rotation.hpp"
#include "common/error.hpp"
#include "geom/metrics.hpp"
#include "geom/self_intersection.hpp"
#include "geom/obj_io.hpp"
#include "geom/winding.hpp"
#include "place/motion_volume.hpp"
#include "retarget/displacement_field.hpp"

namespace scanrig {

namespace {

// Typed access to a command options object; unknown keys are rejected.
class OptionReader {
 public:
  OptionReader(const Json& j, JsonPath at) : j_(j), at_(std::move(at)) {
    if (!j_.is_object()) {
      at_.fail("options must be an object");
    }
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const Json& get(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }
  JsonPath at(const std::string& key) const { return at_ / key; }

  fs::path path(const std::string& key, bool required, bool must_exist = true) {
    if (!has(key)) {
      if (required) {
        throwInvalid("missing required option --" + flag(key));
      }
      return {};
    }
    fs::path p = readString(get(key), at(key));
    if (p.empty()) {
      at(key).fail("empty path");
    }
    if (must_exist && !fs::exists(p)) {
      at(key).fail("'" + p.string() + "' does not exist");
    }
    return p;
  }
  void number(const std::string& key, double& v) {
    if (has(key)) v = readNumber(get(key), at(key));
  }
  void integer(const std::string& key, int& v) {
    if (has(key)) v = readInt(get(key), at(key));
  }
  void boolean(const std::string& key, bool& v) {
    if (has(key)) v = readBool(get(key), at(key));
  }
  void seed(const std::string& key, uint64_t& v) {
    if (has(key)) {
      const Json& s = get(key);
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<int64_t>() >= 0)) {
        at(key).fail("expected a nonnegative integer");
      }
      v = s.get<uint64_t>();
    }
  }
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) {
        at(key).fail("unknown option");
      }
    }
  }

  static std::string flag(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
  }

 private:
  const Json& j_;
  JsonPath at_;
  std::set<std::string> used_;
};

ParametricBody bodyOrDemo(const fs::path& path) { return path.empty() ? makeDemoBody() : loadBody(path); }

Json pathJson(const fs::path& p) { return p.generic_string(); }

void readShapes(OptionReader& r, int& count, double& scale) {
  if (!r.has("shapes")) {
    return;
  }
  const JsonPath at = r.at("shapes");
  OptionReader s(r.get("shapes"), at);
  s.integer("count", count);
  s.number("scale", scale);
  s.finish();
}

Json aabbOfPoints(const Points& pts) { return aabbToJson(bounds(pts)); }

Json pointsJson(const Points& pts) {
  Json a = Json::array();
  for (const Vec3& p : pts) {
    a.push_back(toJson(p));
  }
  return a;
}

double maxDistance(const Points& a, const Points& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, (a[i] - b[i]).norm());
  }
  return m;
}

Json check(const std::string& name, bool passed, double value, double limit) {
  Json c = Json::object();
  c["name"] = name;
  c["passed"] = passed;
  c["value"] = value;
  c["limit"] = limit;
  return c;
}

bool allPassed(const Json& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Json& c) { return c["passed"].get<bool>(); });
}

}  // namespace

// ---------------------------------------------------------------------------
// fit

FitCommand fitCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("fit options"));
  FitCommand c;
  c.scan = r.path("scan", true);
  c.body = r.path("body", false);
  c.keypoints = r.path("keypoints", false);
  c.skeleton = r.path("skeleton", false);
  c.out = r.path("out", true, false);
  if (r.has("fit")) {
    c.fit = fitConfigFromJson(r.get("fit"), r.at("fit"), c.fit);
  }
  r.boolean("joints_only", c.joints_only);
  r.finish();
  if (c.keypoints.empty() && c.skeleton.empty()) {
    throwInvalid("missing --keypoints (or --skeleton): fitting needs 2D keypoints or a 3D skeleton");
  }
  if (!c.keypoints.empty() && !c.skeleton.empty()) {
    throwInvalid("--keypoints and --skeleton are mutually exclusive");
  }
  return c;
}

Json runFit(const FitCommand& cmd) {
  cmd.fit.validate();
  const Mesh scan = loadObj(cmd.scan.string());
  const ParametricBody body = bodyOrDemo(cmd.body);
  Skeleton3D skeleton;
  Json triangulation = nullptr;
  if (!cmd.keypoints.empty()) {
    const KeypointViews views = loadKeypoints(cmd.keypoints);
    const TriangulatedSkeleton tri = triangulateKeypoints(views);
    skeleton.joints = tri.joints;
    skeleton.valid = tri.valid;
    triangulation = Json::object();
    triangulation["valid_joints"] = tri.numValid();
    Json rms = Json::array();
    for (size_t j = 0; j < tri.joints.size(); ++j) {
      rms.push_back(tri.valid[j] ? Json(tri.reprojection_rms[j]) : Json(nullptr));
    }
    triangulation["reprojection_rms_px"] = std::move(rms);
    Json diag = Json::array();
    for (const std::string& d : tri.diagnostics) {
      if (!d.empty()) diag.push_back(d);
    }
    triangulation["diagnostics"] = std::move(diag);
  } else {
    skeleton = loadSkeleton(cmd.skeleton);
  }
  if (static_cast<int>(skeleton.joints.size()) != body.numJoints()) {
    throwInvalid("skeleton has " + std::to_string(skeleton.joints.size()) + " joints, body has " +
                 std::to_string(body.numJoints()));
  }

  const FitResult result = fitBody(body, scan, skeleton.joints, skeleton.valid, cmd.fit, cmd.joints_only);
  const uint64_t scan_hash = contentHash(scan);

  const fs::path result_file = cmd.out / "fit_result.json";
  const fs::path mesh_file = cmd.out / "fitted.obj";
  const fs::path skeleton_file = cmd.out / "skeleton.json";
  Json doc = fitResultToJson(result, cmd.fit, scan_hash);
  doc["joints_only"] = cmd.joints_only;
  writeJsonFile(result_file, doc);
  saveObj(mesh_file.string(), result.posed.mesh);
  saveSkeleton(skeleton_file, skeleton);

  Json summary = Json::object();
  summary["command"] = "fit";
  summary["fit_result"] = pathJson(result_file);
  summary["fitted_mesh"] = pathJson(mesh_file);
  summary["skeleton"] = pathJson(skeleton_file);
  summary["objective"] = result.objective;
  summary["inside_fraction"] = result.inside_fraction;
  summary["chamfer_mm"] = result.chamfer_mm;
  summary["v2v_mm"] = result.v2v_mm ? Json(*result.v2v_mm) : Json(nullptr);
  summary["triangulation"] = std::move(triangulation);
  return summary;
}

// ---------------------------------------------------------------------------
// retarget

RetargetCommand retargetCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("retarget options"));
  RetargetCommand c;
  c.scan = r.path("scan", true);
  c.fit_result = r.path("fit_result", true);
  c.body = r.path("body", false);
  c.betas = r.path("betas", false);
  c.out = r.path("out", true, false);
  readShapes(r, c.num_shapes, c.shape_scale);
  r.seed("seed", c.seed);
  r.finish();
  return c;
}

static std::vector<ShapeParams> loadShapeList(const fs::path& path, int num_shapes) {
  const Json doc = readJsonFile(path);
  const JsonPath at(path.string());
  checkHeader(doc, "shape_list", at);
  const Json& betas = requireField(doc, "betas", at);
  if (!betas.is_array()) {
    (at / "betas").fail("expected an array");
  }
  std::vector<ShapeParams> out;
  for (size_t i = 0; i < betas.size(); ++i) {
    out.push_back({readVector(betas[i], (at / "betas")[i], num_shapes)});
  }
  return out;
}

Json runRetarget(const RetargetCommand& cmd) {
  const Mesh scan = loadObj(cmd.scan.string());
  const FitRecord fit = loadFitRecord(cmd.fit_result);
  if (fit.scan_hash != contentHash(scan)) {
    throwInvalid(cmd.fit_result.string() + ": field 'scan_hash': fit result belongs to a different scan than " +
                 cmd.scan.string());
  }
  const ParametricBody body = bodyOrDemo(cmd.body);
  if (static_cast<int>(fit.theta.joint_rotations.size()) != body.numJoints() ||
      fit.beta.beta.size() != body.numShapes()) {
    throwInvalid(cmd.fit_result.string() + ": parameters do not match the body model");
  }

  std::vector<ShapeParams> betas;
  if (!cmd.betas.empty()) {
    betas = loadShapeList(cmd.betas, body.numShapes());
  } else {
    if (cmd.num_shapes < 0) {
      throwInvalid("shape count must be nonnegative");
    }
    std::mt19937_64 rng(cmd.seed);
    for (int i = 0; i < cmd.num_shapes; ++i) {
      betas.push_back(sampleShape(rng(), cmd.shape_scale, body.numShapes()));
    }
  }
  if (betas.empty()) {
    throwInvalid("empty beta list: nothing to retarget");
  }

  // Field identities on the fitted pose, shared by every asset.
  const PosedBody fitted = poseMesh(body, fit.theta, fit.beta);
  const DisplacementField field = bindField(scan, fitted.mesh);
  const Points anchors = anchorPoints(field, fitted.mesh);
  Points rebuilt(anchors.size());
  for (size_t k = 0; k < anchors.size(); ++k) {
    rebuilt[k] = anchors[k] + field.displacements[k];
  }
  const double reconstruction = maxDistance(rebuilt, scan.vertices);
  const double identity = maxDistance(applyField(field, fitted.mesh), scan.vertices);

  Json manifest = header("retarget_manifest");
  manifest["seed"] = cmd.seed;
  manifest["scan"] = pathJson(cmd.scan);
  manifest["scan_hash"] = hashToHex(contentHash(scan));
  Json field_checks = Json::array();
  field_checks.push_back(check("reconstruction_max_error_m", reconstruction <= 1e-9, reconstruction, 1e-9));
  field_checks.push_back(check("identity_repose_max_error_m", identity <= 1e-9, identity, 1e-9));
  manifest["field_checks"] = field_checks;
  // Reported, not checked: reshaping may add intersections, and the
  // capsule-built demo body already has some where limbs overlap.
  manifest["scan_self_intersections"] = countSelfIntersections(scan);
  bool passed = allPassed(field_checks);

  Json assets = Json::array();
  std::vector<fs::path> dirs;
  for (size_t i = 0; i < betas.size(); ++i) {
    const RiggedAsset asset = makeRestAsset(scan, body, fit.theta, fit.beta, betas[i]);
    char name[32];
    std::snprintf(name, sizeof name, "asset_%02zu", i);
    const fs::path dir = cmd.out / name;
    saveAsset(dir, asset);
    dirs.push_back(dir);
    const double row_error = asset.skin_weights.maxRowSumError();
    Json a = Json::object();
    a["dir"] = pathJson(dir);
    a["beta"] = toJson(betas[i].beta);
    Json checks = Json::array();
    checks.push_back(check("weight_row_sum_max_error", row_error <= 1e-9, row_error, 1e-9));
    checks.push_back(check("weights_nonnegative", asset.skin_weights.allNonNegative(), 0.0, 0.0));
    passed = passed && allPassed(checks);
    a["checks"] = std::move(checks);
    a["self_intersections"] = countSelfIntersections(asset.rest_mesh);
    assets.push_back(std::move(a));
  }
  manifest["assets"] = std::move(assets);
  manifest["all_passed"] = passed;
  const fs::path manifest_file = cmd.out / "manifest.json";
  writeJsonFile(manifest_file, manifest);
  if (!passed) {
    throw Error(ErrorCode::kNumerical, "retarget invariant checks failed; see " + manifest_file.string());
  }

  Json summary = Json::object();
  summary["command"] = "retarget";
  summary["manifest"] = pathJson(manifest_file);
  Json list = Json::array();
  for (const auto& d : dirs) list.push_back(pathJson(d));
  summary["assets"] = std::move(list);
  return summary;
}

// ---------------------------------------------------------------------------
// animate

AnimateCommand animateCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("animate options"));
  AnimateCommand c;
  c.asset = r.path("asset", true);
  c.clip = r.path("clip", true);
  c.out = r.path("out", true, false);
  r.boolean("write_meshes", c.write_meshes);
  r.finish();
  return c;
}

Json runAnimate(const AnimateCommand& cmd) {
  const RiggedAsset asset = loadAsset(cmd.asset);
  const AnimationClip clip = loadClip(cmd.clip);
  Json doc = header("motion");
  doc["asset"] = pathJson(cmd.asset);
  doc["clip"] = pathJson(cmd.clip);
  doc["fps"] = clip.fps;
  Json frames = Json::array();
  for (size_t f = 0; f < clip.frames.size(); ++f) {
    const Mesh mesh = poseAsset(asset, clip.frames[f]);
    Json fj = Json::object();
    fj["aabb"] = aabbOfPoints(mesh.vertices);
    fj["joints"] = pointsJson(poseAssetJoints(asset, clip.frames[f]));
    if (cmd.write_meshes) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04zu.obj", f);
      const fs::path mesh_file = cmd.out / "frames" / name;
      fs::create_directories(mesh_file.parent_path());
      saveObj(mesh_file.string(), mesh);
      fj["mesh"] = pathJson(mesh_file);
    }
    frames.push_back(std::move(fj));
  }
  doc["frames"] = std::move(frames);
  const fs::path motion_file = cmd.out / "motion.json";
  writeJsonFile(motion_file, doc);

  Json summary = Json::object();
  summary["command"] = "animate";
  summary["motion"] = pathJson(motion_file);
  summary["frames"] = clip.frames.size();
  return summary;
}

// ---------------------------------------------------------------------------
// place

PlaceCommand placeCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("place options"));
  PlaceCommand c;
  c.scene = r.path("scene", true);
  c.out = r.path("out", true, false);
  c.cma.sigma0 = 0.0;
  c.cma.target = 0.0;
  if (r.has("cma")) {
    c.cma = cmaConfigFromJson(r.get("cma"), r.at("cma"), c.cma);
  }
  r.seed("seed", c.seed);
  if (!r.has("subjects")) {
    throwInvalid("missing required option --subject");
  }
  const Json& subjects = r.get("subjects");
  const JsonPath sp = r.at("subjects");
  if (!subjects.is_array() || subjects.empty()) {
    sp.fail("expected a non-empty array of {asset, clip}");
  }
  for (size_t i = 0; i < subjects.size(); ++i) {
    OptionReader s(subjects[i], sp[i]);
    c.subjects.push_back({s.path("asset", true), s.path("clip", true)});
    s.finish();
  }
  r.finish();
  return c;
}

namespace {

Json placementParamsJson(const std::vector<PlacementParams>& params) {
  Json a = Json::array();
  for (const PlacementParams& p : params) {
    Json pj = Json::object();
    pj["translation"] = Json::array({p.translation.x(), p.translation.y()});
    pj["yaw"] = p.yaw;
    a.push_back(std::move(pj));
  }
  return a;
}

}  // namespace

Json runPlace(const PlaceCommand& cmd) {
  const SceneLayout scene = loadScene(cmd.scene);
  struct Animated {
    std::vector<Mesh> meshes;
    std::vector<Points> joints;
    double fps = 0.0;
  };
  std::vector<Animated> people;
  std::vector<MotionVolume> volumes;
  for (const PlaceSubject& s : cmd.subjects) {
    const RiggedAsset asset = loadAsset(s.asset);
    const AnimationClip clip = loadClip(s.clip);
    Animated a;
    a.meshes = animateAsset(asset, clip);
    for (const ClipFrame& f : clip.frames) {
      a.joints.push_back(poseAssetJoints(asset, f));
    }
    a.fps = clip.fps;
    volumes.push_back(motionVolume(a.meshes));
    people.push_back(std::move(a));
  }

  PlacementOptions options = PlacementOptions::defaults();
  options.cma = cmd.cma;
  options.cma.seed = cmd.seed;
  const PlacementOutcome outcome = placeSequences(scene, volumes, options);

  Json placement = header("placement");
  placement["seed"] = cmd.seed;
  placement["scene"] = pathJson(cmd.scene);
  placement["success"] = outcome.success;
  Json subjects = Json::array();
  for (const PlaceSubject& s : cmd.subjects) {
    Json sj = Json::object();
    sj["asset"] = pathJson(s.asset);
    sj["clip"] = pathJson(s.clip);
    subjects.push_back(std::move(sj));
  }
  placement["subjects"] = std::move(subjects);
  placement["params"] = placementParamsJson(outcome.params);
  placement["loss"] = placementLossToJson(outcome.loss);
  placement["verified_loss"] = placementLossToJson(outcome.verified_loss);
  placement["generations"] = outcome.generations;
  placement["evaluations"] = outcome.evaluations;
  placement["runs"] = outcome.runs;
  placement["cma"] = cmaConfigToJson(options.cma);

  if (!outcome.success) {
    const fs::path report = cmd.out / "placement_failure.json";
    placement["kind"] = "placement_failure";
    writeJsonFile(report, placement);
    throw Error(ErrorCode::kInfeasible, "no collision-free placement found (best loss " +
                                            std::to_string(outcome.verified_loss.total()) + "); report written to " +
                                            report.string());
  }
  const fs::path placement_file = cmd.out / "placement.json";
  writeJsonFile(placement_file, placement);

  // Dataset-style annotation record.
  Json gt = header("groundtruth");
  gt["seed"] = cmd.seed;
  gt["up_axis"] = std::string(1, "xyz"[scene.up_axis]);
  Json cams = Json::array();
  std::vector<PinholeCamera> cameras;
  if (scene.up_axis == 2) {
    const Vec3 c = scene.bounds.center();
    const Vec3 e = scene.bounds.extent();
    cameras = cornerCameras(Vec2(c.x(), c.y()), 0.5 * std::max(e.x(), e.y()), {2.4, 2.6, 2.5, 2.7});
    for (const PinholeCamera& cam : cameras) {
      cams.push_back(cameraToJson(cam));
    }
  }
  gt["cameras"] = std::move(cams);
  Json persons = Json::array();
  for (size_t i = 0; i < people.size(); ++i) {
    const PlacementParams& p = outcome.params[i];
    Json person = Json::object();
    person["asset"] = pathJson(cmd.subjects[i].asset);
    person["clip"] = pathJson(cmd.subjects[i].clip);
    person["fps"] = people[i].fps;
    person["translation"] = Json::array({p.translation.x(), p.translation.y()});
    person["yaw"] = p.yaw;
    Json frames = Json::array();
    for (size_t f = 0; f < people[i].meshes.size(); ++f) {
      Points verts = people[i].meshes[f].vertices;
      for (Vec3& v : verts) v = placePoint(v, p, scene.up_axis);
      Points joints = people[i].joints[f];
      for (Vec3& j : joints) j = placePoint(j, p, scene.up_axis);
      Json fj = Json::object();
      fj["frame"] = f;
      fj["joints"] = pointsJson(joints);
      fj["aabb"] = aabbOfPoints(verts);
      fj["placed_box"] = aabbToJson(placeBox(volumes[i].frames[f], p, scene.up_axis));
      Json pixels = Json::array();
      for (const PinholeCamera& cam : cameras) {
        const CameraView view = cam.view();
        Json uv = Json::array();
        for (const Vec3& j : joints) {
          if (view.inFront(j)) {
            const Vec2 px = view.project(j);
            uv.push_back(Json::array({px.x(), px.y()}));
          } else {
            uv.push_back(nullptr);
          }
        }
        pixels.push_back(std::move(uv));
      }
      fj["joints_2d"] = std::move(pixels);
      frames.push_back(std::move(fj));
    }
    person["frames"] = std::move(frames);
    persons.push_back(std::move(person));
  }
  gt["people"] = std::move(persons);
  const fs::path gt_file = cmd.out / "groundtruth.json";
  writeJsonFile(gt_file, gt);

  Json summary = Json::object();
  summary["command"] = "place";
  summary["placement"] = pathJson(placement_file);
  summary["groundtruth"] = pathJson(gt_file);
  summary["generations"] = outcome.generations;
  summary["verified_loss"] = outcome.verified_loss.total();
  return summary;
}

// ---------------------------------------------------------------------------
// eval

EvalCommand evalCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("eval options"));
  EvalCommand c;
  c.mesh = r.path("mesh", false);
  c.asset = r.path("asset", false);
  c.reference = r.path("reference", true);
  c.out = r.path("out", true, false);
  if (r.has("v2v")) {
    c.v2v = readString(r.get("v2v"), r.at("v2v"));
    if (c.v2v != "auto" && c.v2v != "on" && c.v2v != "off") {
      r.at("v2v").fail("expected auto, on or off");
    }
  }
  r.finish();
  if (c.mesh.empty() == c.asset.empty()) {
    throwInvalid("eval needs exactly one of --mesh or --asset");
  }
  return c;
}

Json runEval(const EvalCommand& cmd) {
  const Mesh mesh = cmd.mesh.empty() ? loadAsset(cmd.asset).rest_mesh : loadObj(cmd.mesh.string());
  const Mesh reference = loadObj(cmd.reference.string());
  Json metrics = header("metrics");
  metrics["input"] = pathJson(cmd.mesh.empty() ? cmd.asset : cmd.mesh);
  metrics["reference"] = pathJson(cmd.reference);
  const bool same_count = mesh.numVertices() == reference.numVertices();
  if (cmd.v2v == "on" && !same_count) {
    throwInvalid("V2V requested but the meshes have " + std::to_string(mesh.numVertices()) + " and " +
                 std::to_string(reference.numVertices()) + " vertices");
  }
  if (cmd.v2v != "off" && same_count) {
    metrics["v2v_mm"] = v2vErrorMm(mesh.vertices, reference.vertices);
  } else {
    metrics["v2v_mm"] = nullptr;
  }
  metrics["chamfer_mm"] = chamferDistanceMm(mesh, reference);
  const InsideOutside io = classifyInside(reference, mesh.vertices);
  metrics["inside_fraction"] = static_cast<double>(io.inside.size()) / std::max(1, mesh.numVertices());
  metrics["num_vertices"] = mesh.numVertices();
  const fs::path out = cmd.out / "metrics.json";
  writeJsonFile(out, metrics);
  Json summary = metrics;
  summary.erase("format_version");
  summary.erase("kind");
  summary["command"] = "eval";
  summary["metrics"] = pathJson(out);
  return summary;
}

// ---------------------------------------------------------------------------
// generate

GenerateCommand generateCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("generate options"));
  GenerateCommand c;
  c.out = r.path("out", true, false);
  r.seed("seed", c.seed);
  r.number("shape_scale", c.subject.shape_scale);
  r.number("inflation", c.subject.inflation);
  r.number("pixel_noise", c.subject.pixel_noise);
  r.boolean("with_floor", c.with_floor);
  r.finish();
  if (c.subject.shape_scale < 0.0 || c.subject.inflation < 0.0 || c.subject.pixel_noise < 0.0) {
    throwInvalid("generate: shape_scale, inflation and pixel_noise must be nonnegative");
  }
  return c;
}

Json runGenerate(const GenerateCommand& cmd) {
  const ParametricBody body = makeDemoBody();
  const SyntheticSubject subject = makeSyntheticSubject(body, cmd.seed, cmd.subject);
  const fs::path& o = cmd.out;
  saveBody(o / "body.json", body);
  saveObj((o / "scan.obj").string(), subject.scan);
  saveObj((o / "truth.obj").string(), subject.truth.mesh);
  saveKeypoints(o / "keypoints.json", keypointViews(subject));
  saveSkeleton(o / "skeleton_truth.json", {subject.truth.joints, std::vector<bool>(subject.truth.joints.size(), true)});
  Json truth = header("synthetic_truth");
  truth["seed"] = cmd.seed;
  truth["theta"] = poseToJson(subject.theta);
  truth["beta"] = toJson(subject.beta.beta);
  truth["inflation"] = cmd.subject.inflation;
  truth["pixel_noise"] = cmd.subject.pixel_noise;
  writeJsonFile(o / "truth.json", truth);
  saveClip(o / "clip_walk.json", makeWalkingClip(body.joint_names));
  saveScene(o / "scene.json", demoRoom(cmd.with_floor));

  Json summary = Json::object();
  summary["command"] = "generate";
  summary["out"] = pathJson(o);
  Json files = Json::array();
  for (const char* f : {"body.json", "scan.obj", "truth.obj", "keypoints.json", "skeleton_truth.json", "truth.json",
                        "clip_walk.json", "scene.json"}) {
    files.push_back(pathJson(o / f));
  }
  summary["files"] = std::move(files);
  return summary;
}

// ---------------------------------------------------------------------------
// demo

DemoCommand demoCommandFromJson(const Json& options) {
  OptionReader r(options, JsonPath("demo options"));
  DemoCommand c;
  c.out = r.path("out", true, false);
  r.seed("seed", c.seed);
  readShapes(r, c.num_shapes, c.shape_scale);
  if (r.has("fit")) {
    c.fit = fitConfigFromJson(r.get("fit"), r.at("fit"), c.fit);
  }
  c.cma.sigma0 = 0.0;
  c.cma.target = 0.0;
  if (r.has("cma")) {
    c.cma = cmaConfigFromJson(r.get("cma"), r.at("cma"), c.cma);
  }
  r.finish();
  if (c.num_shapes <= 0) {
    throwInvalid("demo needs at least one shape");
  }
  return c;
}

namespace {

// Re-reads a written document and checks that serializing it again
// reproduces the file byte for byte.
bool jsonRoundTrips(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  return Json::parse(text).dump(2) + "\n" == text;
}

}  // namespace

Json runDemo(const DemoCommand& cmd) {
  std::mt19937_64 rng(cmd.seed);
  const fs::path in_dir = cmd.out / "input";

  GenerateCommand gen;
  gen.out = in_dir;
  gen.seed = rng();
  runGenerate(gen);

  FitCommand fit;
  fit.scan = in_dir / "scan.obj";
  fit.body = in_dir / "body.json";
  fit.keypoints = in_dir / "keypoints.json";
  fit.out = cmd.out / "fit";
  fit.fit = cmd.fit;
  const Json fit_summary = runFit(fit);

  RetargetCommand rt;
  rt.scan = fit.scan;
  rt.fit_result = fit.out / "fit_result.json";
  rt.body = fit.body;
  rt.out = cmd.out / "assets";
  rt.num_shapes = cmd.num_shapes;
  rt.shape_scale = cmd.shape_scale;
  rt.seed = rng();
  const Json rt_summary = runRetarget(rt);

  const ParametricBody body = loadBody(fit.body);
  PlaceCommand place;
  place.scene = in_dir / "scene.json";
  place.out = cmd.out / "place";
  place.cma = cmd.cma;
  place.seed = rng();
  std::vector<fs::path> motion_files;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (size_t i = 0; i < rt_summary["assets"].size(); ++i) {
    WalkOptions walk;
    walk.speed = 1.0 + 0.1 * static_cast<double>(i % 5);
    walk.phase = phase(rng);
    char name[32];
    std::snprintf(name, sizeof name, "walk_%02zu.json", i);
    const fs::path clip_file = cmd.out / "clips" / name;
    saveClip(clip_file, makeWalkingClip(body.joint_names, walk));
    const fs::path asset_dir = rt_summary["assets"][i].get<std::string>();
    AnimateCommand anim;
    anim.asset = asset_dir;
    anim.clip = clip_file;
    anim.out = cmd.out / "animate" / asset_dir.filename();
    motion_files.push_back(runAnimate(anim)["motion"].get<std::string>());
    place.subjects.push_back({asset_dir, clip_file});
  }
  const Json place_summary = runPlace(place);

  // Invariant checks over everything written above.
  Json checks = Json::array();
  const Json fit_doc = readJsonFile(rt.fit_result);
  const Json& trace = fit_doc["objective_trace"];
  double worst_increase = 0.0;
  for (size_t k = 1; k < trace.size(); ++k) {
    worst_increase = std::max(worst_increase, trace[k].get<double>() - trace[k - 1].get<double>());
  }
  checks.push_back(check("fit_objective_trace_nonincreasing", worst_increase <= 1e-9, worst_increase, 1e-9));
  const Json manifest = readJsonFile(rt_summary["manifest"].get<std::string>());
  checks.push_back(check("retarget_invariants", manifest["all_passed"].get<bool>(), 0.0, 0.0));
  const int verified = place_summary["verified_loss"].get<int>();
  checks.push_back(check("placement_verified_zero_loss", verified == 0, verified, 0.0));

  std::vector<fs::path> written = {in_dir / "body.json", in_dir / "keypoints.json", in_dir / "truth.json",
                                   in_dir / "skeleton_truth.json", in_dir / "clip_walk.json", in_dir / "scene.json",
                                   rt.fit_result, fit.out / "skeleton.json",
                                   rt_summary["manifest"].get<std::string>(),
                                   place_summary["placement"].get<std::string>(),
                                   place_summary["groundtruth"].get<std::string>()};
  for (const fs::path& m : motion_files) written.push_back(m);
  for (const auto& a : rt_summary["assets"]) written.push_back(fs::path(a.get<std::string>()) / "rig.json");
  int not_round_trip = 0;
  for (const fs::path& p : written) {
    not_round_trip += jsonRoundTrips(p) ? 0 : 1;
  }
  checks.push_back(check("documents_round_trip", not_round_trip == 0, not_round_trip, 0.0));
  // Typed re-reads of every format.
  loadBody(in_dir / "body.json");
  loadKeypoints(in_dir / "keypoints.json");
  loadSkeleton(fit.out / "skeleton.json");
  loadFitRecord(rt.fit_result);
  loadScene(in_dir / "scene.json");
  for (const auto& s : place.subjects) {
    loadAsset(s.asset);
    loadClip(s.clip);
  }
  loadObj((fit.out / "fitted.obj").string());

  const bool passed = allPassed(checks);
  Json demo = header("demo_manifest");
  demo["seed"] = cmd.seed;
  demo["derived_seeds"] = {{"subject", gen.seed}, {"shapes", rt.seed}, {"placement", place.seed}};
  demo["fit"] = fit_summary;
  demo["retarget"] = rt_summary;
  demo["place"] = place_summary;
  demo["checks"] = checks;
  demo["all_passed"] = passed;
  const fs::path demo_file = cmd.out / "demo_manifest.json";
  writeJsonFile(demo_file, demo);
  if (!passed) {
    throw Error(ErrorCode::kNumerical, "demo invariant checks failed; see " + demo_file.string());
  }
  Json summary = Json::object();
  summary["command"] = "demo";
  summary["manifest"] = pathJson(demo_file);
  summary["v2v_mm"] = fit_summary["v2v_mm"];
  summary["checks"] = checks;
  summary["all_passed"] = passed;
  return summary;
}

// ---------------------------------------------------------------------------

Json applyPipelineConfig(const std::string& command, Json options, const Json& config, const JsonPath& at) {
  // One config can serve several commands, so config entries a command does
  // not take are skipped rather than rejected.
  static const std::map<std::string, std::set<std::string>> kAccepts = {
      {"fit", {"scan", "body", "keypoints", "skeleton", "out", "fit"}},
      {"retarget", {"scan", "fit_result", "body", "betas", "out", "shapes", "seed"}},
      {"animate", {"asset", "clip", "out"}},
      {"place", {"scene", "subjects", "out", "cma", "seed"}},
      {"eval", {"mesh", "asset", "reference", "out"}},
      {"generate", {"out", "seed"}},
      {"demo", {"out", "seed", "shapes", "fit", "cma"}},
  };
  auto accepts = kAccepts.find(command);
  if (accepts == kAccepts.end()) {
    throwInvalid("unknown command '" + command + "'");
  }
  auto wanted = [&](const std::string& key) { return accepts->second.count(key) > 0; };

  checkHeader(config, "pipeline_config", at);
  for (const auto& [key, value] : config.items()) {
    const JsonPath p = at / key;
    if (key == "format_version" || key == "kind") {
      continue;
    }
    if (key == "seed" || key == "shapes") {
      if (wanted(key)) options[key] = value;
    } else if (key == "fit" || key == "cma") {
      if (!value.is_object()) {
        p.fail("expected an object");
      }
      if (!wanted(key)) continue;
      if (!options.contains(key)) {
        options[key] = Json::object();
      }
      for (const auto& [k, v] : value.items()) {
        options[key][k] = v;
      }
    } else if (key == "paths") {
      if (!value.is_object()) {
        p.fail("expected an object");
      }
      static const std::set<std::string> kPaths = {"scan",  "body", "keypoints", "skeleton",  "fit_result",
                                                   "betas", "asset", "clip",     "scene",     "mesh",
                                                   "reference", "out", "subjects"};
      for (const auto& [k, v] : value.items()) {
        if (!kPaths.count(k)) {
          (p / k).fail("unknown path");
        }
        if (wanted(k)) options[k] = v;
      }
    } else {
      p.fail("unknown key");
    }
  }
  return options;
}

Json runCommand(const std::string& command, const Json& options) {
  if (command == "fit") return runFit(fitCommandFromJson(options));
  if (command == "retarget") return runRetarget(retargetCommandFromJson(options));
  if (command == "animate") return runAnimate(animateCommandFromJson(options));
  if (command == "place") return runPlace(placeCommandFromJson(options));
  if (command == "eval") return runEval(evalCommandFromJson(options));
  if (command == "generate") return runGenerate(generateCommandFromJson(options));
  if (command == "demo") return runDemo(demoCommandFromJson(options));
  throwInvalid("unknown command '" + command + "'");
}

}  // namespace scanrig
