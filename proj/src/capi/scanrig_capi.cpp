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

#include "scanrig/scanrig.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "body/demo_body.hpp"
#include "common/error.hpp"
#include "geom/metrics.hpp"
#include "geom/obj_io.hpp"
#include "geom/winding.hpp"
#include "io/json_formats.hpp"
#include "pipeline/commands.hpp"

struct sr_mesh {
  scanrig::Mesh mesh;
};

struct sr_body {
  scanrig::ParametricBody body;
};

namespace {

thread_local std::string g_last_error;

sr_status fail(sr_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
sr_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SR_OK;
  } catch (const scanrig::Error& e) {
    return fail(static_cast<sr_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SR_ERR_INVALID_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SR_ERR_INTERNAL, e.what());
  }
}

char* copyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) {
    throw std::bad_alloc();
  }
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void requireNonNull(const void* p, const char* what) {
  if (!p) {
    scanrig::throwInvalid(std::string(what) + " must not be NULL");
  }
}

}  // namespace

extern "C" {

const char* sr_last_error(void) { return g_last_error.c_str(); }

const char* sr_version(void) { return "0.1.0"; }

sr_status sr_mesh_load_obj(const char* path, sr_mesh** out) {
  return guarded([&] {
    requireNonNull(path, "path");
    requireNonNull(out, "out");
    *out = new sr_mesh{scanrig::loadObj(path)};
  });
}

sr_status sr_mesh_create(const double* vertices, size_t num_vertices, const int32_t* faces, size_t num_faces,
                         sr_mesh** out) {
  return guarded([&] {
    requireNonNull(out, "out");
    if (num_vertices > 0) requireNonNull(vertices, "vertices");
    if (num_faces > 0) requireNonNull(faces, "faces");
    scanrig::Mesh m;
    m.vertices.resize(num_vertices);
    for (size_t i = 0; i < num_vertices; ++i) {
      m.vertices[i] = scanrig::Vec3(vertices[3 * i], vertices[3 * i + 1], vertices[3 * i + 2]);
    }
    m.faces.resize(num_faces);
    for (size_t f = 0; f < num_faces; ++f) {
      m.faces[f] = {faces[3 * f], faces[3 * f + 1], faces[3 * f + 2]};
    }
    *out = new sr_mesh{scanrig::validateMesh(std::move(m))};
  });
}

sr_status sr_mesh_save_obj(const sr_mesh* mesh, const char* path) {
  return guarded([&] {
    requireNonNull(mesh, "mesh");
    requireNonNull(path, "path");
    scanrig::saveObj(path, mesh->mesh);
  });
}

size_t sr_mesh_num_vertices(const sr_mesh* mesh) { return mesh ? mesh->mesh.vertices.size() : 0; }

size_t sr_mesh_num_faces(const sr_mesh* mesh) { return mesh ? mesh->mesh.faces.size() : 0; }

sr_status sr_mesh_vertices(const sr_mesh* mesh, double* out, size_t capacity) {
  return guarded([&] {
    requireNonNull(mesh, "mesh");
    requireNonNull(out, "out");
    if (capacity < 3 * mesh->mesh.vertices.size()) {
      scanrig::throwInvalid("output buffer holds " + std::to_string(capacity) + " doubles, need " +
                            std::to_string(3 * mesh->mesh.vertices.size()));
    }
    for (size_t i = 0; i < mesh->mesh.vertices.size(); ++i) {
      for (int k = 0; k < 3; ++k) out[3 * i + k] = mesh->mesh.vertices[i][k];
    }
  });
}

uint64_t sr_mesh_hash(const sr_mesh* mesh) { return mesh ? scanrig::contentHash(mesh->mesh) : 0; }

void sr_mesh_free(sr_mesh* mesh) { delete mesh; }

sr_status sr_v2v_mm(const sr_mesh* a, const sr_mesh* b, double* out) {
  return guarded([&] {
    requireNonNull(a, "a");
    requireNonNull(b, "b");
    requireNonNull(out, "out");
    *out = scanrig::v2vErrorMm(a->mesh.vertices, b->mesh.vertices);
  });
}

sr_status sr_chamfer_mm(const sr_mesh* a, const sr_mesh* b, double* out) {
  return guarded([&] {
    requireNonNull(a, "a");
    requireNonNull(b, "b");
    requireNonNull(out, "out");
    *out = scanrig::chamferDistanceMm(a->mesh, b->mesh);
  });
}

sr_status sr_winding_number(const sr_mesh* mesh, const double point[3], double* out) {
  return guarded([&] {
    requireNonNull(mesh, "mesh");
    requireNonNull(point, "point");
    requireNonNull(out, "out");
    *out = scanrig::windingNumber(mesh->mesh, scanrig::Vec3(point[0], point[1], point[2]));
  });
}

sr_status sr_body_create_demo(sr_body** out) {
  return guarded([&] {
    requireNonNull(out, "out");
    *out = new sr_body{scanrig::makeDemoBody()};
  });
}

sr_status sr_body_load(const char* path, sr_body** out) {
  return guarded([&] {
    requireNonNull(path, "path");
    requireNonNull(out, "out");
    *out = new sr_body{scanrig::loadBody(path)};
  });
}

sr_status sr_body_save(const sr_body* body, const char* path) {
  return guarded([&] {
    requireNonNull(body, "body");
    requireNonNull(path, "path");
    scanrig::saveBody(path, body->body);
  });
}

int sr_body_num_joints(const sr_body* body) { return body ? body->body.numJoints() : 0; }

int sr_body_num_shapes(const sr_body* body) { return body ? body->body.numShapes() : 0; }

int sr_body_num_vertices(const sr_body* body) { return body ? body->body.numVertices() : 0; }

sr_status sr_body_pose(const sr_body* body, const double* pose, const double* beta, sr_mesh** out_mesh,
                       double* out_joints) {
  return guarded([&] {
    requireNonNull(body, "body");
    const scanrig::ParametricBody& b = body->body;
    scanrig::PoseParams theta = scanrig::PoseParams::identity(b.numJoints());
    if (pose) {
      for (int k = 0; k < 6; ++k) theta.global_rotation[k] = pose[k];
      for (int k = 0; k < 3; ++k) theta.translation[k] = pose[6 + k];
      for (int j = 0; j < b.numJoints(); ++j) {
        for (int k = 0; k < 6; ++k) theta.joint_rotations[j][k] = pose[9 + 6 * j + k];
      }
      if (!theta.allFinite()) {
        scanrig::throwInvalid("pose contains non-finite values");
      }
    }
    scanrig::ShapeParams shape = scanrig::ShapeParams::zero(b.numShapes());
    if (beta) {
      for (int s = 0; s < b.numShapes(); ++s) shape.beta[s] = beta[s];
    }
    scanrig::PosedBody posed = scanrig::poseMesh(b, theta, shape);
    if (out_joints) {
      for (size_t j = 0; j < posed.joints.size(); ++j) {
        for (int k = 0; k < 3; ++k) out_joints[3 * j + k] = posed.joints[j][k];
      }
    }
    if (out_mesh) {
      *out_mesh = new sr_mesh{std::move(posed.mesh)};
    }
  });
}

void sr_body_free(sr_body* body) { delete body; }

sr_status sr_run_command(const char* command, const char* options_json, const char* config_path,
                         char** result_json) {
  if (result_json) {
    *result_json = nullptr;
  }
  return guarded([&] {
    requireNonNull(command, "command");
    scanrig::Json options = scanrig::Json::object();
    if (options_json && *options_json) {
      try {
        options = scanrig::Json::parse(options_json);
      } catch (const scanrig::Json::parse_error& e) {
        scanrig::throwInvalid(std::string("options: malformed JSON: ") + e.what());
      }
    }
    if (config_path && *config_path) {
      options = scanrig::applyPipelineConfig(command, std::move(options), scanrig::readJsonFile(config_path),
                                             scanrig::JsonPath(config_path));
    }
    const scanrig::Json summary = scanrig::runCommand(command, options);
    if (result_json) {
      *result_json = copyString(summary.dump(2));
    }
  });
}

void sr_string_free(char* s) { std::free(s); }

}  // extern "C"
