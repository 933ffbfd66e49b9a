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

#include "common/sparse.hpp"
#include "geom/frames.hpp"
#include "geom/mesh.hpp"

namespace scanrig {

// Scan geometry expressed relative to a body surface: each scan vertex is
// its closest body point (barycentric row of `connection`) plus a
// world-space offset, together with the body's local frame at that point.
struct DisplacementField {
  SparseRows connection{0};           // N_s x N_t
  std::vector<int> bind_faces;        // body face per scan vertex
  std::vector<Vec3> bind_barycentric;  // clamped, renormalized
  Points displacements;               // D = V_s - A V_t
  std::vector<LocalFrame> bind_frames;
  // Body topology the field was bound against.
  std::vector<Face> body_faces;
  std::vector<Vec2> body_uvs;

  int numScanVertices() const { return static_cast<int>(displacements.size()); }
};

// Throws if the body mesh has no UVs or either mesh is empty.
DisplacementField bindField(const Mesh& scan, const Mesh& body_mesh);

// Closest points A V_t on a body with the bind topology.
Points anchorPoints(const DisplacementField& field, const Mesh& body_mesh);

// Moves the scan with the body: v'_k = A_k V'_t + R'_k R_k^T d_k.
// Throws if the body's faces or UVs differ from the bind body.
Points applyField(const DisplacementField& field, const Mesh& new_body_mesh);

// A W for per-body-vertex weights W (N_t x J). Throws on dimension mismatch
// or rows that are not stochastic within 1e-6.
SparseRows transferSkinning(const DisplacementField& field, const SparseRows& body_weights);

}  // namespace scanrig
