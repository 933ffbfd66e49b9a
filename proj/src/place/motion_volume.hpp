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

#include <vector>

#include "geom/mesh.hpp"

namespace scanrig {

// Per-frame tight boxes of an animated subject in its own frame.
struct MotionVolume {
  std::vector<Aabb> frames;

  int duration() const { return static_cast<int>(frames.size()); }
  // Throws unless every box is finite with min <= max.
  void validate() const;
};

// Throws on an empty sequence or an empty frame.
MotionVolume motionVolume(const std::vector<Mesh>& frames);
MotionVolume motionVolume(const std::vector<Points>& frames);

}  // namespace scanrig
