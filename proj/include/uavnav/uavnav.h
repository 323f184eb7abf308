/*
 * Copyright 2026 The uavnav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the uavnav simulator and benchmark harness.
 *
 * Every function returns a uavnav_status. On failure a description of the
 * error is available from uavnav_last_error() on the calling thread until
 * the next failing call. Strings returned through char** out-parameters are
 * owned by the caller and released with uavnav_string_free().
 */
#ifndef UAVNAV_UAVNAV_H_
#define UAVNAV_UAVNAV_H_

#include <stdint.h>

#if defined(_WIN32)
#define UAVNAV_API __declspec(dllexport)
#else
#define UAVNAV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavnav_status {
  UAVNAV_OK = 0,
  UAVNAV_INVALID_ARGUMENT = 1,
  UAVNAV_IO = 2,
  UAVNAV_PARSE = 3,
  UAVNAV_INFEASIBLE = 4,
  UAVNAV_PROTOCOL = 5,
  UAVNAV_NETWORK = 6,
  UAVNAV_INTERNAL = 7
} uavnav_status;

typedef struct uavnav_scene uavnav_scene;
typedef struct uavnav_env uavnav_env;
typedef struct uavnav_server uavnav_server;

/* World frame is right-handed with z up; yaw is counter-clockwise from +x.
 * Angles are radians. */
typedef struct uavnav_pose {
  double x, y, z;
  double pitch, roll, yaw;
} uavnav_pose;

typedef struct uavnav_state {
  uavnav_pose pose;
  double vx, vy, vz;
  double yaw_rate;
  double time;
} uavnav_state;

/* Camera views accepted by uavnav_env_render_depth. */
enum { UAVNAV_VIEW_FRONT = 0, UAVNAV_VIEW_LEFT, UAVNAV_VIEW_RIGHT, UAVNAV_VIEW_REAR, UAVNAV_VIEW_DOWN };

UAVNAV_API const char* uavnav_version(void);
UAVNAV_API const char* uavnav_status_name(uavnav_status status);
UAVNAV_API const char* uavnav_last_error(void);
UAVNAV_API void uavnav_string_free(char* s);

/* Scenes. config_json may be NULL for defaults; keys mirror the scene
 * generator settings (style, size_x, size_y, height, obstacle_density, ...). */
UAVNAV_API uavnav_status uavnav_scene_generate(uint64_t seed, const char* config_json, uavnav_scene** out);
UAVNAV_API uavnav_status uavnav_scene_load(const char* path, uavnav_scene** out);
UAVNAV_API uavnav_status uavnav_scene_save(const uavnav_scene* scene, const char* path);
UAVNAV_API uavnav_status uavnav_scene_to_json(const uavnav_scene* scene, char** out_json);
/* out_hit is 0 when nothing lies within max_range; out_distance is then max_range. */
UAVNAV_API uavnav_status uavnav_scene_raycast(const uavnav_scene* scene, const double origin[3], const double dir[3],
                                              double max_range, double* out_distance, int* out_hit);
UAVNAV_API uavnav_status uavnav_scene_collides(const uavnav_scene* scene, const double position[3], double radius,
                                               int* out_collides);
UAVNAV_API void uavnav_scene_destroy(uavnav_scene* scene);

/* Single-UAV environments. The environment keeps its own copy of the scene.
 * limits_json may be NULL for the default airframe. */
UAVNAV_API uavnav_status uavnav_env_create(const uavnav_scene* scene, const uavnav_pose* start,
                                           const char* limits_json, uavnav_env** out);
UAVNAV_API uavnav_status uavnav_env_step_velocity(uavnav_env* env, const double velocity[3], double yaw_rate,
                                                  int body_frame, int* out_collision);
UAVNAV_API uavnav_status uavnav_env_fly_to(uavnav_env* env, const uavnav_pose* target, int* out_reached,
                                           int* out_collision);
UAVNAV_API uavnav_status uavnav_env_state(const uavnav_env* env, uavnav_state* out);
/* Writes resolution * resolution row-major ranges in meters. */
UAVNAV_API uavnav_status uavnav_env_render_depth(const uavnav_env* env, int view, int resolution, double fov_deg,
                                                 float* out_values);
UAVNAV_API void uavnav_env_destroy(uavnav_env* env);

/* Batch operations take a JSON configuration and return a JSON summary. */
UAVNAV_API uavnav_status uavnav_generate_scenes(const char* config_json, char** out_json);
UAVNAV_API uavnav_status uavnav_generate_episodes(const char* config_json, char** out_json);
UAVNAV_API uavnav_status uavnav_evaluate(const char* config_json, char** out_json);
UAVNAV_API uavnav_status uavnav_replay(const char* config_json, char** out_json);
UAVNAV_API uavnav_status uavnav_collect_dagger(const char* config_json, char** out_json);
UAVNAV_API uavnav_status uavnav_split(const char* config_json, char** out_json);

/* Session server. The listening socket is bound by uavnav_server_create;
 * uavnav_server_run blocks until uavnav_server_stop is called. */
UAVNAV_API uavnav_status uavnav_server_create(const char* config_json, uavnav_server** out);
UAVNAV_API uavnav_status uavnav_server_port(const uavnav_server* server, int* out_port);
UAVNAV_API uavnav_status uavnav_server_run(uavnav_server* server);
UAVNAV_API uavnav_status uavnav_server_stop(uavnav_server* server);
UAVNAV_API void uavnav_server_destroy(uavnav_server* server);

#ifdef __cplusplus
}
#endif

#endif /* UAVNAV_UAVNAV_H_ */
