// Copyright 2026 The uavnav Authors
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

#include "uavnav/uavnav.h"

#include <cstring>
#include <map>
#include <memory>
#include <new>
#include <string>

#include "uavnav/collection.hpp"
#include "uavnav/error.hpp"
#include "uavnav/generation.hpp"
#include "uavnav/runner.hpp"
#include "uavnav/serialization.hpp"
#include "uavnav/server.hpp"

struct uavnav_scene {
  uavnav::Scene scene;
};

struct uavnav_env {
  uavnav::Scene scene;
  uavnav::KinematicLimits limits;
  uavnav::UavState state;
};

struct uavnav_server {
  std::unique_ptr<uavnav::Server> server;
};

namespace {

using uavnav::json;

thread_local std::string g_last_error;

uavnav_status to_status(uavnav::ErrorCode code) {
  switch (code) {
    case uavnav::ErrorCode::InvalidArgument:
      return UAVNAV_INVALID_ARGUMENT;
    case uavnav::ErrorCode::Io:
      return UAVNAV_IO;
    case uavnav::ErrorCode::Parse:
      return UAVNAV_PARSE;
    case uavnav::ErrorCode::Infeasible:
      return UAVNAV_INFEASIBLE;
    case uavnav::ErrorCode::Protocol:
      return UAVNAV_PROTOCOL;
    case uavnav::ErrorCode::Network:
      return UAVNAV_NETWORK;
    case uavnav::ErrorCode::Internal:
      return UAVNAV_INTERNAL;
  }
  return UAVNAV_INTERNAL;
}

template <class Fn>
uavnav_status guarded(Fn&& fn) {
  try {
    fn();
    return UAVNAV_OK;
  } catch (const uavnav::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return UAVNAV_PARSE;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return UAVNAV_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return UAVNAV_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UAVNAV_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return UAVNAV_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw uavnav::Error(uavnav::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

json parse_config(const char* text) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  uavnav::require(j.is_object(), "configuration must be a JSON object", uavnav::ErrorCode::Parse);
  return j;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_json(char** out, const json& j) {
  if (out) *out = dup_string(j.dump(2));
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

uavnav::SceneConfig scene_config(const json& j) {
  uavnav::SceneConfig c;
  if (j.contains("style")) c.style = uavnav::style_from_name(j.at("style").get<std::string>());
  take(j, "size_x", c.size_x);
  take(j, "size_y", c.size_y);
  take(j, "height", c.height);
  take(j, "obstacle_density", c.obstacle_density);
  if (j.contains("start_region")) c.start_region = j.at("start_region").get<uavnav::Rect>();
  take(j, "n_regions", c.n_regions);
  take(j, "region_size", c.region_size);
  take(j, "clearance", c.clearance);
  take(j, "min_region_distance", c.min_region_distance);
  return c;
}

uavnav::KinematicLimits limits_config(const json& j) {
  uavnav::KinematicLimits l;
  take(j, "max_horizontal_speed", l.max_horizontal_speed);
  take(j, "max_vertical_speed", l.max_vertical_speed);
  take(j, "max_yaw_rate", l.max_yaw_rate);
  take(j, "max_accel", l.max_accel);
  take(j, "max_tilt", l.max_tilt);
  take(j, "collision_radius", l.collision_radius);
  take(j, "dt", l.dt);
  take(j, "reach_tolerance", l.reach_tolerance);
  take(j, "position_gain", l.position_gain);
  take(j, "yaw_gain", l.yaw_gain);
  take(j, "max_steps_per_waypoint", l.max_steps_per_waypoint);
  l.validate();
  return l;
}

uavnav::HarnessConfig harness_config(const json& j) {
  uavnav::HarnessConfig h;
  if (j.contains("limits")) h.limits = limits_config(j.at("limits"));
  take(j, "max_decisions", h.max_decisions);
  take(j, "max_waypoints", h.max_waypoints);
  take(j, "detection_range", h.detection_range);
  take(j, "detection_landing", h.detection_landing);
  if (j.contains("resolution")) h.camera.resolution = j.at("resolution").get<int>();
  if (j.contains("fov_deg")) h.camera.fov_deg = j.at("fov_deg").get<double>();
  uavnav::require(h.max_decisions >= 1 && h.max_waypoints >= 1, "decision and waypoint budgets must be positive");
  return h;
}

uavnav::AssistantConfig assistant_config(const json& j) {
  uavnav::AssistantConfig a;
  if (j.contains("assistant")) a.level = uavnav::assist_level_from_name(j.at("assistant").get<std::string>());
  return a;
}

uavnav::OsrMode osr_mode(const json& j) {
  const std::string m = j.value("osr", "goal");
  if (m == "goal") return uavnav::OsrMode::Goal;
  if (m == "path") return uavnav::OsrMode::Path;
  throw uavnav::Error(uavnav::ErrorCode::InvalidArgument, "osr must be goal or path");
}

std::string required_string(const json& j, const char* key) {
  uavnav::require(j.contains(key) && j.at(key).is_string(), std::string("missing string field '") + key + "'");
  return j.at(key).get<std::string>();
}

uavnav::Pose to_pose(const uavnav_pose& p) { return uavnav::Pose(p.x, p.y, p.z, p.pitch, p.roll, p.yaw); }

json outcome_counts(const std::vector<uavnav::EpisodeResult>& results) {
  std::map<std::string, int> counts;
  for (const auto& r : results) ++counts[std::string(uavnav::outcome_name(r.outcome))];
  return counts;
}

}  // namespace

extern "C" {

const char* uavnav_version(void) { return "1.0.0"; }

const char* uavnav_status_name(uavnav_status status) {
  switch (status) {
    case UAVNAV_OK:
      return "ok";
    case UAVNAV_INVALID_ARGUMENT:
      return "invalid_argument";
    case UAVNAV_IO:
      return "io";
    case UAVNAV_PARSE:
      return "parse";
    case UAVNAV_INFEASIBLE:
      return "infeasible";
    case UAVNAV_PROTOCOL:
      return "protocol";
    case UAVNAV_NETWORK:
      return "network";
    case UAVNAV_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* uavnav_last_error(void) { return g_last_error.c_str(); }

void uavnav_string_free(char* s) { std::free(s); }

uavnav_status uavnav_scene_generate(uint64_t seed, const char* config_json, uavnav_scene** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const json cfg = parse_config(config_json);
    auto scene = uavnav::generate_scene(seed, scene_config(cfg), cfg.value("id", std::string()));
    *out = new uavnav_scene{std::move(scene)};
  });
}

uavnav_status uavnav_scene_load(const char* path, uavnav_scene** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new uavnav_scene{uavnav::scene_from_json(uavnav::read_json_file(path))};
  });
}

uavnav_status uavnav_scene_save(const uavnav_scene* scene, const char* path) {
  return guarded([&] {
    need(scene, "scene");
    need(path, "path");
    uavnav::write_text_file(path, uavnav::dump_canonical(uavnav::scene_to_json(scene->scene)) + "\n");
  });
}

uavnav_status uavnav_scene_to_json(const uavnav_scene* scene, char** out_json) {
  return guarded([&] {
    need(scene, "scene");
    need(out_json, "out_json");
    *out_json = dup_string(uavnav::dump_canonical(uavnav::scene_to_json(scene->scene)));
  });
}

uavnav_status uavnav_scene_raycast(const uavnav_scene* scene, const double origin[3], const double dir[3],
                                   double max_range, double* out_distance, int* out_hit) {
  return guarded([&] {
    need(scene, "scene");
    need(origin, "origin");
    need(dir, "dir");
    need(out_distance, "out_distance");
    need(out_hit, "out_hit");
    const uavnav::Vec3 d{dir[0], dir[1], dir[2]};
    uavnav::require(d.finite() && d.norm() > 0.0, "ray direction must be finite and non-zero");
    uavnav::require(max_range > 0.0, "max_range must be positive");
    const auto hit = scene->scene.raycast({origin[0], origin[1], origin[2]}, d.normalized(), max_range);
    *out_hit = hit ? 1 : 0;
    *out_distance = hit ? hit->distance : max_range;
  });
}

uavnav_status uavnav_scene_collides(const uavnav_scene* scene, const double position[3], double radius,
                                    int* out_collides) {
  return guarded([&] {
    need(scene, "scene");
    need(position, "position");
    need(out_collides, "out_collides");
    *out_collides = uavnav::collision_check(scene->scene, {position[0], position[1], position[2]}, radius) ? 1 : 0;
  });
}

void uavnav_scene_destroy(uavnav_scene* scene) { delete scene; }

uavnav_status uavnav_env_create(const uavnav_scene* scene, const uavnav_pose* start, const char* limits_json,
                                uavnav_env** out) {
  return guarded([&] {
    need(scene, "scene");
    need(start, "start");
    need(out, "out");
    *out = nullptr;
    const uavnav::Pose p = to_pose(*start);
    uavnav::require(p.finite(), "start pose must be finite");
    *out = new uavnav_env{scene->scene, limits_config(parse_config(limits_json)), uavnav::hover_state(p)};
  });
}

uavnav_status uavnav_env_step_velocity(uavnav_env* env, const double velocity[3], double yaw_rate, int body_frame,
                                       int* out_collision) {
  return guarded([&] {
    need(env, "env");
    need(velocity, "velocity");
    uavnav::VelocityCommand cmd;
    cmd.velocity = {velocity[0], velocity[1], velocity[2]};
    cmd.yaw_rate = yaw_rate;
    cmd.body_frame = body_frame != 0;
    uavnav::require(cmd.velocity.finite() && std::isfinite(yaw_rate), "velocity command must be finite");
    const auto r = uavnav::step(env->state, cmd, env->limits, env->scene);
    env->state = r.state;
    if (out_collision) *out_collision = r.collision ? 1 : 0;
  });
}

uavnav_status uavnav_env_fly_to(uavnav_env* env, const uavnav_pose* target, int* out_reached, int* out_collision) {
  return guarded([&] {
    need(env, "env");
    need(target, "target");
    const uavnav::Pose t = to_pose(*target);
    uavnav::require(t.finite(), "target pose must be finite");
    const auto flight = uavnav::fly_to_waypoint(env->state, t, env->limits, env->scene);
    env->state = flight.states.back();
    if (out_reached) *out_reached = flight.reached ? 1 : 0;
    if (out_collision) *out_collision = flight.collision ? 1 : 0;
  });
}

uavnav_status uavnav_env_state(const uavnav_env* env, uavnav_state* out) {
  return guarded([&] {
    need(env, "env");
    need(out, "out");
    const auto& s = env->state;
    out->pose = {s.pose.position.x, s.pose.position.y, s.pose.position.z, s.pose.pitch, s.pose.roll, s.pose.yaw};
    out->vx = s.velocity.x;
    out->vy = s.velocity.y;
    out->vz = s.velocity.z;
    out->yaw_rate = s.yaw_rate;
    out->time = s.time;
  });
}

uavnav_status uavnav_env_render_depth(const uavnav_env* env, int view, int resolution, double fov_deg,
                                      float* out_values) {
  return guarded([&] {
    need(env, "env");
    need(out_values, "out_values");
    uavnav::require(view >= UAVNAV_VIEW_FRONT && view <= UAVNAV_VIEW_DOWN, "unknown view");
    uavnav::CameraConfig cam;
    cam.resolution = resolution;
    cam.fov_deg = fov_deg;
    const auto img = uavnav::render_depth(env->scene, env->state.pose, static_cast<uavnav::View>(view), cam);
    std::memcpy(out_values, img.values.data(), img.values.size() * sizeof(float));
  });
}

void uavnav_env_destroy(uavnav_env* env) { delete env; }

uavnav_status uavnav_generate_scenes(const char* config_json, char** out_json) {
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const std::filesystem::path dir = required_string(cfg, "out_dir");
    const auto scenes = uavnav::generate_scenes(cfg.value("n_scenes", 6), cfg.value("seed", uint64_t{0}),
                                                scene_config(cfg.value("scene", json::object())));
    uavnav::save_scenes(dir / "scenes", scenes);
    json ids = json::array();
    for (const auto& s : scenes) ids.push_back({{"id", s.id()}, {"style", s.style()}, {"obstacles", s.obstacles().size()}});
    put_json(out_json, {{"scenes_dir", (dir / "scenes").string()}, {"scenes", ids}});
  });
}

uavnav_status uavnav_generate_episodes(const char* config_json, char** out_json) {
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const std::filesystem::path dir = required_string(cfg, "dir");
    uavnav::EpisodeGenConfig gc;
    take(cfg, "episodes_per_scene", gc.episodes_per_scene);
    take(cfg, "distractors_per_scene", gc.distractors_per_scene);
    take(cfg, "min_start_distance", gc.min_start_distance);
    take(cfg, "cruise_altitude_min", gc.cruise_altitude_min);
    take(cfg, "cruise_altitude_max", gc.cruise_altitude_max);
    take(cfg, "record_dt", gc.record_dt);
    if (cfg.contains("limits")) gc.limits = limits_config(cfg.at("limits"));
    const uint64_t seed = cfg.value("seed", uint64_t{0});

    std::vector<uavnav::Scene> scenes;
    std::vector<uavnav::Episode> episodes;
    for (const auto& loaded : uavnav::load_scenes(dir / "scenes")) {
      // Objects are placed afresh so that reruns reproduce the same manifest.
      uavnav::Scene s(loaded.id(), loaded.seed(), loaded.style(), loaded.bounds(), loaded.start_region(),
                      loaded.obstacles(), loaded.feasible_regions());
      auto eps = uavnav::generate_episodes(s, seed, gc);
      episodes.insert(episodes.end(), eps.begin(), eps.end());
      scenes.push_back(std::move(s));
    }
    uavnav::require(!episodes.empty(), "no episodes could be generated", uavnav::ErrorCode::Infeasible);
    uavnav::save_scenes(dir / "scenes", scenes);
    const auto manifest = dir / "episodes.jsonl";
    uavnav::write_manifest(manifest, episodes);
    int easy = 0;
    for (const auto& e : episodes) easy += e.difficulty == uavnav::Difficulty::Easy;
    put_json(out_json, {{"manifest", manifest.string()},
                        {"n_episodes", episodes.size()},
                        {"easy", easy},
                        {"hard", static_cast<int>(episodes.size()) - easy}});
  });
}

uavnav_status uavnav_evaluate(const char* config_json, char** out_json) {
  return guarded([&] {
    const json cfg = parse_config(config_json);
    uavnav::RunConfig rc;
    rc.manifest = required_string(cfg, "manifest");
    rc.output = required_string(cfg, "output");
    rc.n_envs = cfg.value("n_envs", 1);
    rc.base_seed = cfg.value("seed", uint64_t{0});
    rc.assistant = assistant_config(cfg);
    rc.policy.kind = uavnav::policy_kind_from_name(cfg.value("policy", "teacher"));
    rc.policy.seed = rc.base_seed;
    if (cfg.contains("bridge_endpoint")) rc.policy.bridge_endpoint = cfg.at("bridge_endpoint").get<std::string>();
    take(cfg, "bridge_timeout_ms", rc.policy.bridge_timeout_ms);
    rc.harness = harness_config(cfg);
    if (cfg.contains("split_file")) rc.split_file = cfg.at("split_file").get<std::string>();
    rc.osr = osr_mode(cfg);
    const auto out = uavnav::evaluate(rc);
    const std::string label = std::string(uavnav::policy_kind_name(rc.policy.kind)) + " / " +
                              std::string(uavnav::assist_level_name(rc.assistant.level));
    put_json(out_json, {{"results", rc.output.string()},
                        {"report", out.report},
                        {"outcomes", outcome_counts(out.results)},
                        {"table", uavnav::format_report_table(out.report, label)}});
  });
}

uavnav_status uavnav_replay(const char* config_json, char** out_json) {
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const auto report = uavnav::replay(required_string(cfg, "results"), required_string(cfg, "manifest"),
                                       osr_mode(cfg));
    put_json(out_json, {{"report", report}, {"table", uavnav::format_report_table(report, "replay")}});
  });
}

uavnav_status uavnav_collect_dagger(const char* config_json, char** out_json) {
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const auto store = uavnav::load_store(required_string(cfg, "manifest"));
    const std::filesystem::path out_dir = required_string(cfg, "out_dir");
    uavnav::DaggerConfig dc;
    take(cfg, "beta", dc.beta);
    take(cfg, "backtrack_frames", dc.backtrack_frames);
    take(cfg, "record_dt", dc.record_dt);
    dc.assistant = assistant_config(cfg);
    dc.harness = harness_config(cfg);
    const uint64_t seed = cfg.value("seed", uint64_t{0});
    const bool backfill = cfg.value("backfill", true);
    const auto limit = cfg.value("limit", store.episodes.size());
    uavnav::PolicySpec student;
    student.kind = uavnav::policy_kind_from_name(cfg.value("student", "fixed"));
    if (cfg.contains("bridge_endpoint")) student.bridge_endpoint = cfg.at("bridge_endpoint").get<std::string>();
    auto student_policy = uavnav::make_policy(student);
    uavnav::TeacherPolicy teacher;

    int written = 0, backtracks = 0;
    json dropped = json::array();
    for (std::size_t i = 0; i < store.episodes.size() && i < limit; ++i) {
      const auto& e = store.episodes[i];
      dc.seed = uavnav::derive_seed(seed, e.id);
      const auto& scene = store.scene_for(e);
      auto res = uavnav::collect_with_backtracking(scene, e, *student_policy, teacher, dc);
      for (const auto& ev : res.events) backtracks += ev.kind == uavnav::DaggerEventKind::CollisionBacktrack;
      if (res.dropped) {
        dropped.push_back({{"episode_id", e.id}, {"reason", res.drop_reason}});
        continue;
      }
      if (backfill) res.record = uavnav::backfill_sensors(res.record, scene, dc.harness.camera);
      uavnav::write_dataset_entry(out_dir, e, res.record, res.events);
      ++written;
    }
    put_json(out_json, {{"out_dir", out_dir.string()},
                        {"written", written},
                        {"collision_backtracks", backtracks},
                        {"dropped", dropped}});
  });
}

uavnav_status uavnav_split(const char* config_json, char** out_json) {
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const auto episodes = uavnav::read_manifest(required_string(cfg, "manifest"));
    const std::filesystem::path out_dir = required_string(cfg, "out_dir");
    uavnav::SplitConfig sc;
    if (cfg.contains("holdout_scenes")) sc.holdout_scenes = cfg.at("holdout_scenes").get<std::set<std::string>>();
    if (cfg.contains("holdout_categories"))
      sc.holdout_categories = cfg.at("holdout_categories").get<std::set<std::string>>();
    take(cfg, "test_seen_fraction", sc.test_seen_fraction);
    sc.seed = cfg.value("seed", uint64_t{0});
    const auto splits = uavnav::split_dataset(episodes, sc);
    json summary = json::object();
    for (const uavnav::Split* s : splits.all()) {
      std::string lines;
      for (const auto& id : s->easy) lines += json({{"episode_id", id}, {"difficulty", "easy"}}).dump() + "\n";
      for (const auto& id : s->hard) lines += json({{"episode_id", id}, {"difficulty", "hard"}}).dump() + "\n";
      const auto path = out_dir / (s->name + ".jsonl");
      uavnav::write_text_file(path, lines);
      summary[s->name] = {{"path", path.string()}, {"easy", s->easy.size()}, {"hard", s->hard.size()}};
    }
    put_json(out_json, {{"splits", summary}, {"empty_splits", splits.empty_splits}});
  });
}

uavnav_status uavnav_server_create(const char* config_json, uavnav_server** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const json cfg = parse_config(config_json);
    uavnav::ServerConfig sc;
    sc.bind = cfg.value("bind", std::string());
    if (cfg.contains("manifest")) sc.manifest = cfg.at("manifest").get<std::string>();
    if (cfg.contains("record_dir")) sc.record_dir = cfg.at("record_dir").get<std::string>();
    take(cfg, "stream_hz", sc.stream_hz);
    take(cfg, "stream_res", sc.stream_res);
    take(cfg, "time_scale", sc.time_scale);
    take(cfg, "bridge_timeout_ms", sc.bridge_timeout_ms);
    sc.assistant = assistant_config(cfg);
    sc.harness = harness_config(cfg);
    auto server = std::make_unique<uavnav::Server>(std::move(sc));
    *out = new uavnav_server{std::move(server)};
  });
}

uavnav_status uavnav_server_port(const uavnav_server* server, int* out_port) {
  return guarded([&] {
    need(server, "server");
    need(out_port, "out_port");
    *out_port = server->server->port();
  });
}

uavnav_status uavnav_server_run(uavnav_server* server) {
  return guarded([&] {
    need(server, "server");
    server->server->run();
  });
}

uavnav_status uavnav_server_stop(uavnav_server* server) {
  return guarded([&] {
    need(server, "server");
    server->server->stop();
  });
}

void uavnav_server_destroy(uavnav_server* server) { delete server; }

}  // extern "C"
