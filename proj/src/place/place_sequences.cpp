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

#include "place/place_sequences.hpp"

#include "common/error.hpp"

namespace scanrig {
namespace {

VecX pack(const std::vector<PlacementParams>& params) {
  VecX x(3 * params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    x.segment<3>(3 * i) << params[i].translation.x(), params[i].translation.y(), params[i].yaw;
  }
  return x;
}

std::vector<PlacementParams> unpack(const VecX& x) {
  std::vector<PlacementParams> out(x.size() / 3);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i].translation = Vec2(x[3 * i], x[3 * i + 1]);
    out[i].yaw = x[3 * i + 2];
  }
  return out;
}

}  // namespace

PlacementOptions PlacementOptions::defaults() {
  PlacementOptions o;
  o.cma.sigma0 = 0.0;
  o.cma.max_generations = 500;
  o.cma.restarts = 3;
  o.cma.target = 0.0;
  return o;
}

std::vector<PlacementParams> initialPlacement(const SceneLayout& layout, const std::vector<MotionVolume>& volumes,
                                              double yaw_spread) {
  const int a0 = layout.groundAxis0();
  const int a1 = layout.groundAxis1();
  const Vec3 center = layout.bounds.center();
  std::vector<PlacementParams> out(volumes.size());
  for (size_t i = 0; i < volumes.size(); ++i) {
    const Vec3 mid = volumes[i].frames[volumes[i].frames.size() / 2].center();
    PlacementParams p;
    p.yaw = yaw_spread * static_cast<double>(i);
    // Rotate the local midpoint by the yaw and cancel it against the center.
    const Aabb point{mid, mid};
    const Aabb rotated = placeBox(point, p, layout.up_axis);
    p.translation = Vec2(center[a0] - rotated.min[a0], center[a1] - rotated.min[a1]);
    out[i] = p;
  }
  return out;
}

PlacementOutcome placeSequences(const SceneLayout& layout, const std::vector<MotionVolume>& volumes,
                                const PlacementOptions& options) {
  layout.validate();
  if (volumes.empty()) {
    throwInvalid("no motion volumes to place");
  }
  for (const MotionVolume& v : volumes) v.validate();

  CmaConfig cma = options.cma;
  if (!(cma.sigma0 > 0.0)) {
    cma.sigma0 = 0.3 * layout.bounds.diagonal();
  }
  cma.target = std::max(cma.target, 0.0);

  const std::vector<PlacementParams> init = initialPlacement(layout, volumes, options.yaw_spread);
  const Objective objective = [&](const VecX& x) {
    const std::vector<PlacementParams> p = unpack(x);
    return static_cast<double>(placementLoss(layout, volumes, p).total());
  };
  const CmaResult r = cmaMinimize(objective, pack(init), cma);

  PlacementOutcome out;
  out.params = unpack(r.x_best);
  out.loss = placementLoss(layout, volumes, out.params);
  out.verified_loss = bruteForcePlacementLoss(layout, volumes, out.params);
  out.success = out.loss.total() == 0 && out.verified_loss.total() == 0;
  out.generations = r.generations;
  out.evaluations = r.evaluations;
  out.runs = r.runs;
  return out;
}

}  // namespace scanrig
