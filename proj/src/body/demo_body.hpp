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

#include "body/body_model.hpp"

namespace scanrig {

struct DemoBodyOptions {
  int rings = 9;     // rings per limb capsule, excluding the two tips
  int segments = 10; // vertices around each ring
};

// Procedural humanoid: 24 joints in the common SMPL-style layout, one closed
// capsule per limb segment (overlapping at the joints), 4 blendshapes
// (height, girth, arm length, shoulder/hip width), z up, facing +y, T-pose.
// Each capsule's seam and tips are split in UV space so every vertex has a
// well-defined UV tangent; the surface stays geometrically closed.
ParametricBody makeDemoBody(const DemoBodyOptions& options = {});

}  // namespace scanrig
