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

#ifndef SCANRIG_SCANRIG_H_
#define SCANRIG_SCANRIG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SCANRIG_BUILDING_LIBRARY)
#define SR_API __attribute__((visibility("default")))
#else
#define SR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as command-line exit codes. */
typedef enum sr_status {
  SR_OK = 0,
  SR_ERR_INTERNAL = 1,
  SR_ERR_INVALID_INPUT = 2,
  SR_ERR_INFEASIBLE = 3,
  SR_ERR_NUMERICAL = 4
} sr_status;

/* Message for the last failing call on this thread; "" after success. */
SR_API const char* sr_last_error(void);
SR_API const char* sr_version(void);

/* Triangle mesh. */
typedef struct sr_mesh sr_mesh;

SR_API sr_status sr_mesh_load_obj(const char* path, sr_mesh** out);
/* vertices: 3 * num_vertices doubles; faces: 3 * num_faces indices. */
SR_API sr_status sr_mesh_create(const double* vertices, size_t num_vertices, const int32_t* faces, size_t num_faces,
                                sr_mesh** out);
SR_API sr_status sr_mesh_save_obj(const sr_mesh* mesh, const char* path);
SR_API size_t sr_mesh_num_vertices(const sr_mesh* mesh);
SR_API size_t sr_mesh_num_faces(const sr_mesh* mesh);
/* Copies 3 * num_vertices doubles; capacity is in doubles. */
SR_API sr_status sr_mesh_vertices(const sr_mesh* mesh, double* out, size_t capacity);
SR_API uint64_t sr_mesh_hash(const sr_mesh* mesh);
SR_API void sr_mesh_free(sr_mesh* mesh);

/* Metrics in millimeters; inputs in meters. */
SR_API sr_status sr_v2v_mm(const sr_mesh* a, const sr_mesh* b, double* out);
SR_API sr_status sr_chamfer_mm(const sr_mesh* a, const sr_mesh* b, double* out);
SR_API sr_status sr_winding_number(const sr_mesh* mesh, const double point[3], double* out);

/* Parametric body model. */
typedef struct sr_body sr_body;

SR_API sr_status sr_body_create_demo(sr_body** out);
SR_API sr_status sr_body_load(const char* path, sr_body** out);
SR_API sr_status sr_body_save(const sr_body* body, const char* path);
SR_API int sr_body_num_joints(const sr_body* body);
SR_API int sr_body_num_shapes(const sr_body* body);
SR_API int sr_body_num_vertices(const sr_body* body);
/* pose: 6 (global rotation, 6D) + 3 (translation) + 6 * num_joints doubles,
   NULL for the identity pose. beta: num_shapes doubles, NULL for zero. */
SR_API sr_status sr_body_pose(const sr_body* body, const double* pose, const double* beta, sr_mesh** out_mesh,
                              double* out_joints);
SR_API void sr_body_free(sr_body* body);

/* Pipeline commands: "fit", "retarget", "animate", "place", "eval",
   "generate", "demo". options_json uses the command-line flag names with
   underscores. config_path may be NULL; its values override options. On
   success *result_json holds a summary document to release with
   sr_string_free; on failure it is set to NULL. */
SR_API sr_status sr_run_command(const char* command, const char* options_json, const char* config_path,
                                char** result_json);
SR_API void sr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SCANRIG_SCANRIG_H_ */
