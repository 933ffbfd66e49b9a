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

#include <iosfwd>
#include <string>

#include "geom/mesh.hpp"

namespace scanrig {

// Wavefront OBJ subset: v, vt, vn and f records. Polygons are fan
// triangulated. Vertices referenced with conflicting vt/vn indices are split
// so that uvs and normals stay per-vertex. Errors carry "<source>:<line>".
Mesh readObj(std::istream& in, const std::string& source_name,
             DegenerateFacePolicy policy = DegenerateFacePolicy::kReject);
Mesh loadObj(const std::string& path, DegenerateFacePolicy policy = DegenerateFacePolicy::kReject);

// Positions use 9 significant digits.
void writeObj(std::ostream& out, const Mesh& mesh);
void saveObj(const std::string& path, const Mesh& mesh);

}  // namespace scanrig
