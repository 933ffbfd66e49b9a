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

#include "place/motion_volume.hpp"

#include "common/error.hpp"

namespace scanrig {

void MotionVolume::validate() const {
  if (frames.empty()) {
    throwInvalid("motion volume has no frames");
  }
  for (const Aabb& b : frames) {
    if (!b.min.allFinite() || !b.max.allFinite() || !b.valid()) {
      throwInvalid("motion volume has an invalid box");
    }
  }
}

MotionVolume motionVolume(const std::vector<Points>& frames) {
  if (frames.empty()) {
    throwInvalid("cannot build a motion volume from an empty sequence");
  }
  MotionVolume out;
  for (const Points& f : frames) {
    if (f.empty()) {
      throwInvalid("motion volume frame has no vertices");
    }
    out.frames.push_back(bounds(f));
  }
  out.validate();
  return out;
}

MotionVolume motionVolume(const std::vector<Mesh>& frames) {
  std::vector<Points> pts;
  pts.reserve(frames.size());
  for (const Mesh& m : frames) {
    pts.push_back(m.vertices);
  }
  return motionVolume(pts);
}

}  // namespace scanrig
