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

// Command-line driver over the scanrig C API.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scanrig/scanrig.h"

namespace {

using Json = nlohmann::ordered_json;

// Collects flag values; only flags the user gave end up in the options
// document, so library defaults and config files apply to the rest.
class Options {
 public:
  void path(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
            bool required = false) {
    auto* opt = app->add_option(flag, strings_[key], help);
    if (required) opt->required();
  }
  void number(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
              const std::string& section = "") {
    app->add_option(flag, numbers_[{section, key}], help);
  }
  void integer(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
               const std::string& section = "") {
    app->add_option(flag, integers_[{section, key}], help);
  }
  void flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_flag(flag, flags_[key], help);
  }
  void text(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
            const std::string& section = "") {
    app->add_option(flag, texts_[{section, key}], help);
  }

  Json build() const {
    Json j = Json::object();
    for (const auto& [key, v] : strings_) {
      if (v) j[key] = *v;
    }
    for (const auto& [key, v] : numbers_) {
      if (v) at(j, key) = *v;
    }
    for (const auto& [key, v] : integers_) {
      if (v) at(j, key) = *v;
    }
    for (const auto& [key, v] : texts_) {
      if (v) at(j, key) = *v;
    }
    for (const auto& [key, v] : flags_) {
      if (v) j[key] = true;
    }
    return j;
  }

 private:
  using Key = std::pair<std::string, std::string>;  // section, name
  static Json& at(Json& j, const Key& key) {
    if (key.first.empty()) return j[key.second];
    return j[key.first][key.second];
  }

  std::map<std::string, std::optional<std::string>> strings_;
  std::map<Key, std::optional<double>> numbers_;
  std::map<Key, std::optional<int64_t>> integers_;
  std::map<Key, std::optional<std::string>> texts_;
  std::map<std::string, bool> flags_;
};

void addFitFlags(CLI::App* app, Options& o) {
  o.number(app, "--lambda-j", "lambda_j", "Weight of the joint term", "fit");
  o.number(app, "--lambda-i", "lambda_i", "Scan weight for body vertices inside the scan", "fit");
  o.number(app, "--lambda-o", "lambda_o", "Scan weight for body vertices outside the scan", "fit");
  o.number(app, "--w-theta", "w_theta", "Pose prior weight", "fit");
  o.number(app, "--w-beta", "w_beta", "Shape prior weight", "fit");
  o.integer(app, "--max-outer", "max_outer_iterations", "Correspondence refreshes", "fit");
  o.integer(app, "--inner-steps", "inner_steps", "Descent steps per refresh", "fit");
  o.number(app, "--tolerance", "tolerance", "Stop when the objective decreases less than this", "fit");
  o.integer(app, "--stage-a-iterations", "stage_a_iterations", "Skeleton-only alignment steps", "fit");
  o.text(app, "--closest-mode", "closest_mode", "surface or vertex", "fit");
}

void addCmaFlags(CLI::App* app, Options& o) {
  o.integer(app, "--population", "population", "CMA-ES population (0 = automatic)", "cma");
  o.number(app, "--sigma0", "sigma0", "Initial step size in meters (0 = scene scaled)", "cma");
  o.integer(app, "--generations", "max_generations", "Generation budget per run", "cma");
  o.integer(app, "--restarts", "restarts", "Restarts with doubled population", "cma");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scanrig: fit, reshape, animate and place scanned humans"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "pipeline_config document; its values override flags");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Do not print the result summary");

  std::map<std::string, Options> options;
  std::vector<std::string> subjects;

  auto* fit = app.add_subcommand("fit", "Fit the body model to a scan and keypoints");
  {
    Options& o = options["fit"];
    o.path(fit, "--scan", "scan", "Scan mesh (OBJ)");
    o.path(fit, "--body", "body", "Body model (JSON); default: built-in demo body");
    o.path(fit, "--keypoints", "keypoints", "Cameras and 2D keypoints (JSON)");
    o.path(fit, "--skeleton", "skeleton", "3D skeleton (JSON), instead of --keypoints");
    o.path(fit, "--out", "out", "Output directory");
    o.flag(fit, "--joints-only", "joints_only", "Fit the skeleton only, without the scan term");
    addFitFlags(fit, o);
  }
  auto* retarget = app.add_subcommand("retarget", "Build rigged assets reshaped to new body shapes");
  {
    Options& o = options["retarget"];
    o.path(retarget, "--scan", "scan", "Scan mesh (OBJ)");
    o.path(retarget, "--fit-result", "fit_result", "fit_result.json from the fit command");
    o.path(retarget, "--body", "body", "Body model (JSON); default: built-in demo body");
    o.path(retarget, "--betas", "betas", "shape_list document; default: sample --num-shapes");
    o.path(retarget, "--out", "out", "Output directory");
    o.integer(retarget, "--num-shapes", "count", "Number of sampled shapes (default 16)", "shapes");
    o.number(retarget, "--shape-scale", "scale", "Standard deviation of sampled shapes", "shapes");
    o.integer(retarget, "--seed", "seed", "Random seed");
  }
  auto* animate = app.add_subcommand("animate", "Pose a rigged asset with a clip");
  {
    Options& o = options["animate"];
    o.path(animate, "--asset", "asset", "Asset directory");
    o.path(animate, "--clip", "clip", "Clip (JSON)");
    o.path(animate, "--out", "out", "Output directory");
    o.flag(animate, "--write-meshes", "write_meshes", "Also write one OBJ per frame");
  }
  auto* place = app.add_subcommand("place", "Place animated assets in a scene without collisions");
  {
    Options& o = options["place"];
    o.path(place, "--scene", "scene", "Scene (JSON)");
    o.path(place, "--out", "out", "Output directory");
    place->add_option("--subject", subjects, "ASSET_DIR,CLIP.json (repeatable)")->delimiter(';');
    o.integer(place, "--seed", "seed", "Random seed");
    addCmaFlags(place, o);
  }
  auto* eval = app.add_subcommand("eval", "Compare a mesh or asset against a reference mesh");
  {
    Options& o = options["eval"];
    o.path(eval, "--mesh", "mesh", "Mesh to evaluate (OBJ)");
    o.path(eval, "--asset", "asset", "Asset directory to evaluate (its rest mesh)");
    o.path(eval, "--reference", "reference", "Reference mesh (OBJ)");
    o.path(eval, "--out", "out", "Output directory");
    o.text(eval, "--v2v", "v2v", "auto, on or off");
  }
  auto* generate = app.add_subcommand("generate", "Write a synthetic scan bundle, clip and demo scene");
  {
    Options& o = options["generate"];
    o.path(generate, "--out", "out", "Output directory");
    o.integer(generate, "--seed", "seed", "Random seed");
    o.number(generate, "--shape-scale", "shape_scale", "Standard deviation of the subject's shape");
    o.number(generate, "--inflation", "inflation", "Scan offset along normals, meters");
    o.number(generate, "--pixel-noise", "pixel_noise", "Keypoint noise, pixels");
    o.flag(generate, "--with-floor", "with_floor", "Add a floor slab to the scene");
  }
  auto* demo = app.add_subcommand("demo", "Run the whole pipeline on synthetic data");
  {
    Options& o = options["demo"];
    o.path(demo, "--out", "out", "Output directory");
    o.integer(demo, "--seed", "seed", "Random seed");
    o.integer(demo, "--num-shapes", "count", "Reshaped assets to build (default 4)", "shapes");
    o.number(demo, "--shape-scale", "scale", "Standard deviation of sampled shapes", "shapes");
    addFitFlags(demo, o);
    addCmaFlags(demo, o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "scanrig: error: " << e.what() << "\n";
    return SR_ERR_INVALID_INPUT;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Json opts = options[command].build();
  if (command == "place" && !subjects.empty()) {
    Json list = Json::array();
    for (const std::string& s : subjects) {
      const auto comma = s.find(',');
      if (comma == std::string::npos) {
        std::cerr << "scanrig: error: --subject expects ASSET_DIR,CLIP.json, got '" << s << "'\n";
        return SR_ERR_INVALID_INPUT;
      }
      list.push_back({{"asset", s.substr(0, comma)}, {"clip", s.substr(comma + 1)}});
    }
    opts["subjects"] = std::move(list);
  }

  char* result = nullptr;
  const sr_status status =
      sr_run_command(command.c_str(), opts.dump().c_str(), config.empty() ? nullptr : config.c_str(), &result);
  if (status != SR_OK) {
    std::cerr << "scanrig " << command << ": error: " << sr_last_error() << "\n";
    return status;
  }
  if (!quiet && result) {
    std::cout << result << "\n";
  }
  sr_string_free(result);
  return 0;
}
