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

#include "retarget/displacement_field.hpp"

#include <array>

#include "common/error.hpp"
#include "geom/bvh.hpp"

namespace scanrig {
namespace {

void checkTopology(const DisplacementField& field, const Mesh& body) {
  if (body.faces != field.body_faces) {
    throwInvalid("body mesh faces differ from the bind body");
  }
  if (!body.uvs || *body.uvs != field.body_uvs) {
    throwInvalid("body mesh UVs differ from the bind body");
  }
  if (field.connection.cols() != body.numVertices()) {
    throwInvalid("body mesh vertex count differs from the bind body");
  }
}

}  // namespace

DisplacementField bindField(const Mesh& scan, const Mesh& body_mesh) {
  if (!body_mesh.uvs) {
    throwInvalid("body mesh has no UVs; local frames are undefined");
  }
  if (scan.empty() || body_mesh.empty()) {
    throwInvalid("cannot bind a displacement field with an empty mesh");
  }
  const TriangleBvh bvh(body_mesh);
  const std::vector<LocalFrame> frames = vertexFrames(body_mesh);

  DisplacementField field;
  field.connection = SparseRows(body_mesh.numVertices());
  field.body_faces = body_mesh.faces;
  field.body_uvs = *body_mesh.uvs;
  for (const Vec3& v : scan.vertices) {
    const SurfacePoint sp = bvh.closestPoint(v);
    const Face& f = body_mesh.faces[sp.face];
    const std::array<SparseRows::Entry, 3> row = {
        SparseRows::Entry{f[0], sp.barycentric[0]}, SparseRows::Entry{f[1], sp.barycentric[1]},
        SparseRows::Entry{f[2], sp.barycentric[2]}};
    field.connection.appendRow(row);
    field.bind_faces.push_back(sp.face);
    field.bind_barycentric.push_back(sp.barycentric);
    field.bind_frames.push_back(interpolateFrame(body_mesh, frames, sp));
  }
  const Points anchors = field.connection.apply(body_mesh.vertices);
  field.displacements.resize(anchors.size());
  for (size_t k = 0; k < anchors.size(); ++k) {
    field.displacements[k] = scan.vertices[k] - anchors[k];
  }
  return field;
}

Points anchorPoints(const DisplacementField& field, const Mesh& body_mesh) {
  checkTopology(field, body_mesh);
  return field.connection.apply(body_mesh.vertices);
}

Points applyField(const DisplacementField& field, const Mesh& new_body_mesh) {
  Points out = anchorPoints(field, new_body_mesh);
  const std::vector<LocalFrame> frames = vertexFrames(new_body_mesh);
  for (size_t k = 0; k < out.size(); ++k) {
    SurfacePoint at;
    at.face = field.bind_faces[k];
    at.barycentric = field.bind_barycentric[k];
    const LocalFrame now = interpolateFrame(new_body_mesh, frames, at);
    out[k] += now.rotation * (field.bind_frames[k].rotation.transpose() * field.displacements[k]);
  }
  return out;
}

SparseRows transferSkinning(const DisplacementField& field, const SparseRows& body_weights) {
  if (body_weights.rows() != field.connection.cols()) {
    throwInvalid("skin weights have " + std::to_string(body_weights.rows()) + " rows, body has " +
                 std::to_string(field.connection.cols()) + " vertices");
  }
  if (!body_weights.allNonNegative() || body_weights.maxRowSumError() > 1e-6) {
    throwInvalid("body skin weights must be nonnegative with rows summing to 1");
  }
  return field.connection.multiply(body_weights);
}

}  // namespace scanrig
