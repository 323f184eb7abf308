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

#include <pthread.h>

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavnav/uavnav.h"

using json = nlohmann::json;

namespace {

int report_failure(const char* what, uavnav_status st) {
  std::fprintf(stderr, "%s failed (%s): %s\n", what, uavnav_status_name(st), uavnav_last_error());
  return 1;
}

using BatchFn = uavnav_status (*)(const char*, char**);

int run_batch(const char* what, BatchFn fn, const json& cfg, bool print_table) {
  char* out = nullptr;
  const uavnav_status st = fn(cfg.dump().c_str(), &out);
  if (st != UAVNAV_OK) return report_failure(what, st);
  const json doc = json::parse(out);
  uavnav_string_free(out);
  if (print_table && doc.contains("table")) {
    std::cout << doc.at("table").get<std::string>();
    json rest = doc;
    rest.erase("table");
    std::cout << rest.dump(2) << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return 0;
}

struct Harness {
  std::string assistant = "L1";
  int max_decisions = 0;
  int resolution = 0;

  void add(CLI::App* app) {
    app->add_option("--assistant", assistant, "Assistant level: none, L1, L2 or L3");
    app->add_option("--max-decisions", max_decisions, "Decision budget per episode")->check(CLI::PositiveNumber);
    app->add_option("--resolution", resolution, "Depth image resolution")->check(CLI::PositiveNumber);
  }

  void fill(json& cfg) const {
    cfg["assistant"] = assistant;
    if (max_decisions > 0) cfg["max_decisions"] = max_decisions;
    if (resolution > 0) cfg["resolution"] = resolution;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV vision-language navigation benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", uavnav_version());
  app.failure_message(CLI::FailureMessage::help);

  // gen-scenes
  std::string gs_out;
  int gs_n = 6;
  uint64_t gs_seed = 0;
  std::string gs_style;
  double gs_density = -1;
  auto* gen_scenes = app.add_subcommand("gen-scenes", "Generate procedural scenes");
  gen_scenes->add_option("--out", gs_out, "Dataset directory")->required();
  gen_scenes->add_option("--n", gs_n, "Number of scenes")->check(CLI::PositiveNumber);
  gen_scenes->add_option("--seed", gs_seed, "Random seed");
  gen_scenes->add_option("--style", gs_style, "Force one style: urban, forest or open");
  gen_scenes->add_option("--density", gs_density, "Obstacle density override")->check(CLI::Range(0.0, 1.0));

  // gen-episodes
  std::string ge_dir;
  uint64_t ge_seed = 0;
  int ge_per_scene = 10;
  auto* gen_episodes = app.add_subcommand("gen-episodes", "Place targets and plan ground-truth trajectories");
  gen_episodes->add_option("--dir", ge_dir, "Dataset directory holding scenes/")->required();
  gen_episodes->add_option("--seed", ge_seed, "Random seed");
  gen_episodes->add_option("--per-scene", ge_per_scene, "Episodes per scene")->check(CLI::PositiveNumber);

  // eval
  std::string ev_manifest, ev_output, ev_split, ev_bridge, ev_policy = "teacher", ev_osr = "goal";
  int ev_envs = 1, ev_bridge_timeout = 0;
  uint64_t ev_seed = 0;
  Harness ev_h;
  auto* eval = app.add_subcommand("eval", "Evaluate a policy on a manifest");
  eval->add_option("--manifest", ev_manifest, "Episode manifest (JSONL)")->required();
  eval->add_option("--output", ev_output, "Results file (JSONL)")->required();
  eval->add_option("--policy", ev_policy, "random, fixed, teacher or external");
  eval->add_option("--split", ev_split, "Split file restricting the episodes");
  eval->add_option("--bridge", ev_bridge, "host:port of an external policy");
  eval->add_option("--bridge-timeout-ms", ev_bridge_timeout, "Per-decision bridge timeout")
      ->check(CLI::PositiveNumber);
  eval->add_option("--envs", ev_envs, "Parallel environments")->check(CLI::PositiveNumber);
  eval->add_option("--seed", ev_seed, "Base seed");
  eval->add_option("--osr", ev_osr, "Oracle success mode: goal or path");
  ev_h.add(eval);

  // replay
  std::string rp_results, rp_manifest, rp_osr = "goal";
  auto* replay = app.add_subcommand("replay", "Recompute metrics from a stored results file");
  replay->add_option("--results", rp_results, "Results file (JSONL)")->required();
  replay->add_option("--manifest", rp_manifest, "Episode manifest (JSONL)")->required();
  replay->add_option("--osr", rp_osr, "Oracle success mode: goal or path");

  // collect-dagger
  std::string cd_manifest, cd_out, cd_student = "fixed", cd_bridge;
  double cd_beta = 0.7;
  int cd_frames = 2, cd_limit = 0;
  uint64_t cd_seed = 0;
  bool cd_no_backfill = false;
  Harness cd_h;
  auto* dagger = app.add_subcommand("collect-dagger", "Collect trajectories with collision backtracking");
  dagger->add_option("--manifest", cd_manifest, "Episode manifest (JSONL)")->required();
  dagger->add_option("--out", cd_out, "Output dataset directory")->required();
  dagger->add_option("--student", cd_student, "Student policy: random, fixed or external");
  dagger->add_option("--bridge", cd_bridge, "host:port of an external student");
  dagger->add_option("--beta", cd_beta, "Probability of executing the student action")->check(CLI::Range(0.0, 1.0));
  dagger->add_option("--backtrack-frames", cd_frames, "Frames to rewind after a collision")
      ->check(CLI::PositiveNumber);
  dagger->add_option("--limit", cd_limit, "Maximum number of episodes")->check(CLI::PositiveNumber);
  dagger->add_option("--seed", cd_seed, "Random seed");
  dagger->add_flag("--no-backfill", cd_no_backfill, "Skip rendering sensor frames");
  cd_h.add(dagger);

  // split
  std::string sp_manifest, sp_out;
  std::vector<std::string> sp_scenes, sp_categories;
  double sp_fraction = 0.1;
  uint64_t sp_seed = 0;
  auto* split = app.add_subcommand("split", "Partition episodes into train and test splits");
  split->add_option("--manifest", sp_manifest, "Episode manifest (JSONL)")->required();
  split->add_option("--out", sp_out, "Directory for split files")->required();
  split->add_option("--holdout-scene", sp_scenes, "Scene reserved for the unseen-map split");
  split->add_option("--holdout-category", sp_categories, "Object category reserved for the unseen-object split");
  split->add_option("--test-seen-fraction", sp_fraction, "Fraction of seen episodes held for testing")
      ->check(CLI::Range(0.0, 1.0));
  split->add_option("--seed", sp_seed, "Random seed");

  // serve
  std::string sv_bind, sv_manifest, sv_record = "recordings";
  double sv_hz = 10, sv_time_scale = 1;
  int sv_res = 32;
  Harness sv_h;
  auto* serve = app.add_subcommand("serve", "Run the teleoperation and policy bridge server");
  serve->add_option("--bind", sv_bind, "host:port (default from UAVNAV_BIND)");
  serve->add_option("--manifest", sv_manifest, "Episode manifest (JSONL)");
  serve->add_option("--record-dir", sv_record, "Where saved recordings go");
  serve->add_option("--stream-hz", sv_hz, "Observation stream rate")->check(CLI::PositiveNumber);
  serve->add_option("--stream-res", sv_res, "Streamed depth resolution")->check(CLI::PositiveNumber);
  serve->add_option("--time-scale", sv_time_scale, "Simulation speed relative to wall clock")
      ->check(CLI::PositiveNumber);
  sv_h.add(serve);

  CLI11_PARSE(app, argc, argv);

  if (*gen_scenes) {
    json scene = json::object();
    if (!gs_style.empty()) scene["style"] = gs_style;
    if (gs_density >= 0) scene["obstacle_density"] = gs_density;
    return run_batch("gen-scenes", uavnav_generate_scenes,
                     {{"out_dir", gs_out}, {"n_scenes", gs_n}, {"seed", gs_seed}, {"scene", scene}}, false);
  }
  if (*gen_episodes) {
    return run_batch("gen-episodes", uavnav_generate_episodes,
                     {{"dir", ge_dir}, {"seed", ge_seed}, {"episodes_per_scene", ge_per_scene}}, false);
  }
  if (*eval) {
    json cfg = {{"manifest", ev_manifest}, {"output", ev_output}, {"policy", ev_policy},
                {"n_envs", ev_envs},       {"seed", ev_seed},     {"osr", ev_osr}};
    if (!ev_split.empty()) cfg["split_file"] = ev_split;
    if (!ev_bridge.empty()) cfg["bridge_endpoint"] = ev_bridge;
    if (ev_bridge_timeout > 0) cfg["bridge_timeout_ms"] = ev_bridge_timeout;
    ev_h.fill(cfg);
    return run_batch("eval", uavnav_evaluate, cfg, true);
  }
  if (*replay) {
    return run_batch("replay", uavnav_replay, {{"results", rp_results}, {"manifest", rp_manifest}, {"osr", rp_osr}},
                     true);
  }
  if (*dagger) {
    json cfg = {{"manifest", cd_manifest}, {"out_dir", cd_out},          {"student", cd_student},
                {"beta", cd_beta},         {"backtrack_frames", cd_frames}, {"seed", cd_seed},
                {"backfill", !cd_no_backfill}};
    if (cd_limit > 0) cfg["limit"] = cd_limit;
    if (!cd_bridge.empty()) cfg["bridge_endpoint"] = cd_bridge;
    cd_h.fill(cfg);
    return run_batch("collect-dagger", uavnav_collect_dagger, cfg, false);
  }
  if (*split) {
    return run_batch("split", uavnav_split,
                     {{"manifest", sp_manifest},
                      {"out_dir", sp_out},
                      {"holdout_scenes", sp_scenes},
                      {"holdout_categories", sp_categories},
                      {"test_seen_fraction", sp_fraction},
                      {"seed", sp_seed}},
                     false);
  }
  if (*serve) {
    json cfg = {{"bind", sv_bind},   {"record_dir", sv_record}, {"stream_hz", sv_hz},
                {"stream_res", sv_res}, {"time_scale", sv_time_scale}};
    if (!sv_manifest.empty()) cfg["manifest"] = sv_manifest;
    sv_h.fill(cfg);
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
    uavnav_server* server = nullptr;
    uavnav_status st = uavnav_server_create(cfg.dump().c_str(), &server);
    if (st != UAVNAV_OK) return report_failure("serve", st);
    int port = 0;
    uavnav_server_port(server, &port);
    std::cout << "listening on port " << port << std::endl;
    std::thread([server, stop_signals] {
      int sig = 0;
      sigwait(&stop_signals, &sig);
      uavnav_server_stop(server);
    }).detach();
    st = uavnav_server_run(server);
    uavnav_server_destroy(server);
    return st == UAVNAV_OK ? 0 : report_failure("serve", st);
  }
  return 1;
}
