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
#include <vector>

#include "geom/mesh.hpp"

namespace scanrig {

inline constexpr double kInsideThreshold = 0.5;

// Generalized winding number: the exact sum of signed solid angles of all
// faces seen from `query`, divided by 4*pi. About 1 inside and 0 outside a
// closed, outward-oriented surface; overlapping closed components add up.
// Queries lying exactly on the surface are not classified reliably: a face
// coplanar with the query contributes 0, a face containing it up to rounding
// contributes +-1/2, so a closed mesh yields some value in [0, 1].
double windingNumber(const Mesh& mesh, const Vec3& query);

struct InsideOutside {
  std::vector<int> inside;
  std::vector<int> outside;
};

// Partitions point indices; inside iff windingNumber > 0.5.
InsideOutside classifyInside(const Mesh& mesh, std::span<const Vec3> points);

}  // namespace scanrig
