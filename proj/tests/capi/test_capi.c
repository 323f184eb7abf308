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

/* Exercises the C interface from plain C. Usage: test_capi <scratch dir> */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "uavnav/uavnav.h"

static int failures = 0;

#define EXPECT(cond)                                                 \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                    \
    }                                                                \
  } while (0)

#define EXPECT_OK(call)                                                                               \
  do {                                                                                                \
    uavnav_status st_ = (call);                                                                       \
    if (st_ != UAVNAV_OK) {                                                                           \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call, uavnav_status_name(st_), \
              uavnav_last_error());                                                                   \
      ++failures;                                                                                     \
    }                                                                                                 \
  } while (0)

static void scenes(const char* dir) {
  uavnav_scene* scene = NULL;
  EXPECT(uavnav_scene_generate(1, "{not json", &scene) == UAVNAV_PARSE);
  EXPECT(scene == NULL);
  EXPECT(strlen(uavnav_last_error()) > 0);
  EXPECT(uavnav_scene_generate(1, "{\"style\": \"swamp\"}", &scene) == UAVNAV_INVALID_ARGUMENT);
  EXPECT(uavnav_scene_generate(1, NULL, NULL) == UAVNAV_INVALID_ARGUMENT);

  EXPECT_OK(uavnav_scene_generate(5, "{\"size_x\": 200, \"size_y\": 200}", &scene));
  if (!scene) return;

  const double down_origin[3] = {40, 40, 30}, down[3] = {0, 0, -1};
  const double up_origin[3] = {40, 40, 30}, up[3] = {0, 0, 1};
  double d = 0;
  int hit = 0;
  EXPECT_OK(uavnav_scene_raycast(scene, down_origin, down, 100, &d, &hit));
  EXPECT(hit == 1 && fabs(d - 30.0) < 1e-9);
  EXPECT_OK(uavnav_scene_raycast(scene, up_origin, up, 50, &d, &hit));
  EXPECT(hit == 0 && d == 50);

  const double low[3] = {40, 40, 0.5}, free_pt[3] = {40, 40, 10};
  int c = -1;
  EXPECT_OK(uavnav_scene_collides(scene, low, 1.0, &c));
  EXPECT(c == 1);
  EXPECT_OK(uavnav_scene_collides(scene, free_pt, 1.0, &c));
  EXPECT(c == 0);

  char path[1024];
  snprintf(path, sizeof path, "%s/scene.json", dir);
  EXPECT_OK(uavnav_scene_save(scene, path));
  uavnav_scene* back = NULL;
  EXPECT_OK(uavnav_scene_load(path, &back));
  char *a = NULL, *b = NULL;
  EXPECT_OK(uavnav_scene_to_json(scene, &a));
  if (back) EXPECT_OK(uavnav_scene_to_json(back, &b));
  EXPECT(a && b && strcmp(a, b) == 0);
  uavnav_string_free(a);
  uavnav_string_free(b);
  uavnav_scene_destroy(back);
  EXPECT(uavnav_scene_load("/nonexistent/scene.json", &back) == UAVNAV_IO);

  uavnav_env* env = NULL;
  const uavnav_pose start = {40, 40, 10, 0, 0, 0};
  EXPECT(uavnav_env_create(scene, &start, "{\"dt\": -1}", &env) == UAVNAV_INVALID_ARGUMENT);
  EXPECT_OK(uavnav_env_create(scene, &start, NULL, &env));
  uavnav_scene_destroy(scene); /* the environment owns a copy */
  if (!env) return;

  const double zero[3] = {0, 0, 0};
  int collision = 1, reached = 0;
  uavnav_state st;
  for (int i = 0; i < 10; ++i) EXPECT_OK(uavnav_env_step_velocity(env, zero, 0, 1, &collision));
  EXPECT(collision == 0);
  EXPECT_OK(uavnav_env_state(env, &st));
  EXPECT(st.pose.x == 40 && st.pose.y == 40 && st.pose.z == 10);
  EXPECT(fabs(st.time - 1.0) < 1e-9);

  const uavnav_pose goal = {50, 45, 12, 0, 0, 0.5};
  EXPECT_OK(uavnav_env_fly_to(env, &goal, &reached, &collision));
  EXPECT(reached == 1 && collision == 0);
  EXPECT_OK(uavnav_env_state(env, &st));
  EXPECT(fabs(st.pose.x - 50) < 0.5 && fabs(st.pose.y - 45) < 0.5);

  /* Hover until the attitude is level so the down view looks straight down. */
  for (int i = 0; i < 30; ++i) EXPECT_OK(uavnav_env_step_velocity(env, zero, 0, 1, &collision));
  EXPECT_OK(uavnav_env_state(env, &st));
  EXPECT(st.pose.pitch == 0 && st.pose.roll == 0);
  float* depth = malloc(sizeof(float) * 16 * 16);
  EXPECT_OK(uavnav_env_render_depth(env, UAVNAV_VIEW_DOWN, 16, 90, depth));
  EXPECT(fabs(depth[8 * 16 + 8] - st.pose.z) < 1e-3);
  EXPECT(uavnav_env_render_depth(env, 9, 16, 90, depth) == UAVNAV_INVALID_ARGUMENT);
  free(depth);
  uavnav_env_destroy(env);
}

static void batch(const char* dir) {
  char cfg[2048];
  char* out = NULL;
  snprintf(cfg, sizeof cfg, "{\"out_dir\": \"%s/data\", \"n_scenes\": 1, \"seed\": 3}", dir);
  EXPECT_OK(uavnav_generate_scenes(cfg, &out));
  uavnav_string_free(out);
  out = NULL;

  snprintf(cfg, sizeof cfg, "{\"dir\": \"%s/data\", \"seed\": 3, \"episodes_per_scene\": 3}", dir);
  EXPECT_OK(uavnav_generate_episodes(cfg, &out));
  EXPECT(out && strstr(out, "\"n_episodes\"") != NULL);
  uavnav_string_free(out);
  out = NULL;

  snprintf(cfg, sizeof cfg,
           "{\"manifest\": \"%s/data/episodes.jsonl\", \"output\": \"%s/teacher.jsonl\", \"policy\": \"teacher\"}", dir,
           dir);
  EXPECT_OK(uavnav_evaluate(cfg, &out));
  EXPECT(out && strstr(out, "\"sr\": 100.0") != NULL);
  uavnav_string_free(out);
  out = NULL;

  snprintf(cfg, sizeof cfg, "{\"manifest\": \"%s/data/episodes.jsonl\", \"output\": \"%s/x.jsonl\", \"policy\": \"?\"}",
           dir, dir);
  EXPECT(uavnav_evaluate(cfg, &out) == UAVNAV_INVALID_ARGUMENT);
  EXPECT(out == NULL);
  EXPECT(uavnav_evaluate("[]", &out) == UAVNAV_PARSE);
}

static void server(void) {
  uavnav_server* srv = NULL;
  EXPECT(uavnav_server_create("{\"stream_hz\": 0}", &srv) == UAVNAV_INVALID_ARGUMENT);
  EXPECT_OK(uavnav_server_create("{\"bind\": \"127.0.0.1:0\"}", &srv));
  if (!srv) return;
  int port = 0;
  EXPECT_OK(uavnav_server_port(srv, &port));
  EXPECT(port > 0 && port < 65536);
  EXPECT_OK(uavnav_server_stop(srv));
  EXPECT_OK(uavnav_server_run(srv)); /* returns at once after stop */
  uavnav_server_destroy(srv);
}

int main(int argc, char** argv) {
  if (argc != 2) {
    fprintf(stderr, "usage: %s <scratch dir>\n", argv[0]);
    return 2;
  }
  EXPECT(strcmp(uavnav_version(), "1.0.0") == 0);
  EXPECT(strcmp(uavnav_status_name(UAVNAV_PARSE), "parse") == 0);
  scenes(argv[1]);
  batch(argv[1]);
  server();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("C API: all checks passed\n");
  return failures ? 1 : 0;
}
