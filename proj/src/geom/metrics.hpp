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

#include <span>

#include "geom/mesh.hpp"

namespace scanrig {

// Mean Euclidean distance between corresponding vertices, in millimeters.
double v2vErrorMm(std::span<const Vec3> a, std::span<const Vec3> b);

// Mean distance from the vertices of `from` to the surface of `to`, meters.
double meanPointToSurface(const Mesh& from, const Mesh& to);

// Bidirectional Chamfer distance in millimeters:
//   0.5 * (mean_{p in V(a)} d(p, S(b)) + mean_{q in V(b)} d(q, S(a)))
// with d the unsquared point-to-surface distance. Symmetric exactly.
double chamferDistanceMm(const Mesh& a, const Mesh& b);

}  // namespace scanrig
