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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavnav/assistant.hpp"
#include "uavnav/flight.hpp"
#include "uavnav/geometry.hpp"
#include "uavnav/render.hpp"
#include "uavnav/scene.hpp"

namespace uavnav {

enum class Difficulty { Easy, Hard };
std::string_view difficulty_name(Difficulty d);
Difficulty difficulty_from_name(std::string_view name);

inline constexpr double kHardPathLength = 250.0;
inline constexpr double kCollectionReach = 5.0;
inline constexpr double kSuccessRadius = 20.0;

// Easy iff strictly shorter than 250 m.
Difficulty classify_difficulty(double gt_path_length);

struct TargetDescription {
  std::string direction_text;
  std::string object_text;
  std::string environment_text;

  std::string task_text() const;
  bool operator==(const TargetDescription&) const = default;
};

struct Episode {
  std::string id;
  std::string scene_id;
  Pose start;
  TargetDescription description;
  Trajectory gt;
  PlacedObject target;
  Difficulty difficulty = Difficulty::Easy;

  // Throws if the collection rules or the difficulty label are violated.
  void validate() const;
  bool operator==(const Episode&) const = default;
};

struct Observation {
  std::string episode_id;
  int step_index = 0;
  UavState state;
  std::vector<DepthImage> depths;         // five views, or empty if nobody reads them
  std::vector<SemanticImage> semantics;   // five views, or empty
  std::string task_text;
  std::optional<std::string> assistant_text;
};

struct PolicyCommand {
  std::vector<Pose> waypoints;
  bool declare_landing = false;
};

// Interface a navigation policy implements. act() is called once per decision.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void reset(const Episode& episode, uint64_t seed) {
    (void)episode;
    (void)seed;
  }
  virtual PolicyCommand act(const Observation& obs) = 0;
  // Whether act() reads depth and semantic views.
  virtual bool needs_images() const { return false; }
};

enum class Outcome { Success, Collision, Timeout, LandedFar, ProtocolError, Errored };
std::string_view outcome_name(Outcome o);
Outcome outcome_from_name(std::string_view name);

struct EpisodeResult {
  std::string episode_id;
  Trajectory executed;
  Outcome outcome = Outcome::Timeout;
  double final_distance = 0.0;
  bool landed = false;
  std::map<std::string, int> assistant_calls;  // by action kind name
  int decisions = 0;
  std::string error;  // protocol or worker error detail

  bool operator==(const EpisodeResult&) const = default;
};

struct HarnessConfig {
  KinematicLimits limits;
  CameraConfig camera;
  int max_decisions = 300;
  int max_waypoints = 8;
  double success_radius = kSuccessRadius;
  double detection_range = 50.0;
  bool detection_landing = true;
  double approach_height = 3.0;  // above the target centre before touchdown
  bool always_render = false;
};

bool check_success(const Pose& final_pose, const PlacedObject& target, double success_radius = kSuccessRadius);

Observation build_observation(const Scene& scene, const UavState& state, const Episode& episode,
                              const AssistantConfig& assistant, const HarnessConfig& cfg, int step,
                              bool render_images);

// Throws Error(Protocol) on an empty or over-long waypoint list or non-finite pose.
void validate_command(const PolicyCommand& cmd, int max_waypoints);

EpisodeResult run_episode(const Scene& scene, const Episode& episode, Policy& policy, const AssistantConfig& assistant,
                          const HarnessConfig& cfg, uint64_t seed);

Pose clamp_to_bounds(const Pose& p, const Aabb& bounds);
// Sampled at 0.5 m: no point of the segment within `radius` of a surface.
bool segment_clear(const Scene& scene, const Vec3& a, const Vec3& b, double radius);

// Vertical descent from the current horizontal position until ground or roof
// contact. Returned states exclude `from`.
std::vector<UavState> land(const UavState& from, const KinematicLimits& limits, const Scene& scene);

}  // namespace uavnav
