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
#include <vector>

#include "io/json_formats.hpp"
#include "pipeline/synthetic.hpp"

namespace scanrig {

namespace fs = std::filesystem;

struct FitCommand {
  fs::path scan;
  fs::path body;       // empty selects the built-in demo body
  fs::path keypoints;  // one of keypoints or skeleton is required
  fs::path skeleton;
  fs::path out;
  FitConfig fit;
  bool joints_only = false;  // skip the scan term (Stage A only)
};

struct RetargetCommand {
  fs::path scan;
  fs::path fit_result;
  fs::path body;
  fs::path betas;  // shape_list document; empty samples `num_shapes`
  fs::path out;
  int num_shapes = 16;
  double shape_scale = 1.0;
  uint64_t seed = 0;
};

struct AnimateCommand {
  fs::path asset;
  fs::path clip;
  fs::path out;
  bool write_meshes = false;
};

struct PlaceSubject {
  fs::path asset;
  fs::path clip;
};

struct PlaceCommand {
  fs::path scene;
  std::vector<PlaceSubject> subjects;
  fs::path out;
  CmaConfig cma;  // sigma0 <= 0 selects the scene-scaled default
  uint64_t seed = 0;
};

struct EvalCommand {
  fs::path mesh;   // one of mesh or asset
  fs::path asset;
  fs::path reference;
  fs::path out;
  std::string v2v = "auto";  // auto, on, off
};

struct GenerateCommand {
  fs::path out;
  uint64_t seed = 0;
  SyntheticSubjectOptions subject;
  bool with_floor = false;
};

struct DemoCommand {
  fs::path out;
  uint64_t seed = 0;
  int num_shapes = 4;
  double shape_scale = 1.0;
  FitConfig fit;
  CmaConfig cma;
};

// Each command writes its outputs below `out` and returns a summary
// document. Failures throw Error; infeasible placement throws kInfeasible
// after writing a failure report.
Json runFit(const FitCommand& cmd);
Json runRetarget(const RetargetCommand& cmd);
Json runAnimate(const AnimateCommand& cmd);
Json runPlace(const PlaceCommand& cmd);
Json runEval(const EvalCommand& cmd);
Json runGenerate(const GenerateCommand& cmd);
Json runDemo(const DemoCommand& cmd);

// Option documents use the same keys as the command-line flags, e.g.
// {"scan": "a.obj", "out": "dir", "fit": {"lambda_o": 25}}.
FitCommand fitCommandFromJson(const Json& options);
RetargetCommand retargetCommandFromJson(const Json& options);
AnimateCommand animateCommandFromJson(const Json& options);
PlaceCommand placeCommandFromJson(const Json& options);
EvalCommand evalCommandFromJson(const Json& options);
GenerateCommand generateCommandFromJson(const Json& options);
DemoCommand demoCommandFromJson(const Json& options);

// Overlays a pipeline_config document onto command options. Values in the
// config win over those already present.
Json applyPipelineConfig(const std::string& command, Json options, const Json& config, const JsonPath& at);

// Dispatches on the command name: fit, retarget, animate, place, eval,
// generate or demo.
Json runCommand(const std::string& command, const Json& options);

}  // namespace scanrig
