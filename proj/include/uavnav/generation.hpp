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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavnav/collection.hpp"
#include "uavnav/episode.hpp"

namespace uavnav {

// Scenes cycle through urban, forest and open styles; ids are s000, s001, ...
std::vector<Scene> generate_scenes(int n_scenes, uint64_t seed, const SceneConfig& base = {});

struct EpisodeGenConfig {
  int episodes_per_scene = 10;
  int distractors_per_scene = 4;
  double start_altitude_min = 8.0;
  double start_altitude_max = 12.0;
  double min_start_distance = 80.0;  // horizontal, start to target
  double cruise_altitude_min = 15.0;
  double cruise_altitude_max = 35.0;
  double planning_cell = 4.0;
  double planning_margin = 6.0;  // obstacle clearance of grid cells
  double segment_margin = 4.0;   // clearance of shortcut segments
  double final_height = 3.0;     // above the target centre where GT ends
  double record_dt = 0.5;
  int max_attempts = 30;
  KinematicLimits limits;
};

// Grid A* at a fixed altitude followed by line-of-sight shortcutting.
// Returns the horizontal polyline (z = altitude) or nullopt when blocked.
std::optional<std::vector<Vec3>> plan_path(const Scene& scene, const Vec3& start, const Vec3& goal, double altitude,
                                           double cell, double margin, double segment_margin);

// Flies the waypoint controller along climb, cruise and descent legs and
// records every record_dt, always keeping the final state.
std::optional<Trajectory> fly_ground_truth(const Scene& scene, const Pose& start, const PlacedObject& target,
                                           const EpisodeGenConfig& cfg, Rng& rng);

// Places targets and distractors into `scene` and builds its episodes.
std::vector<Episode> generate_episodes(Scene& scene, uint64_t seed, const EpisodeGenConfig& cfg);

// On-disk store: <dir>/episodes.jsonl and <dir>/scenes/<scene id>.json.
struct EpisodeStore {
  std::vector<Episode> episodes;
  std::map<std::string, Scene> scenes;

  const Scene& scene_for(const Episode& e) const;
};

void save_scenes(const std::filesystem::path& dir, const std::vector<Scene>& scenes);
std::vector<Scene> load_scenes(const std::filesystem::path& scenes_dir);
void write_manifest(const std::filesystem::path& path, const std::vector<Episode>& episodes);
std::vector<Episode> read_manifest(const std::filesystem::path& path);
// Scenes are looked up in the "scenes" directory next to the manifest.
EpisodeStore load_store(const std::filesystem::path& manifest);

}  // namespace uavnav
