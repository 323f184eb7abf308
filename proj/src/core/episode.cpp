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

#include "uavnav/episode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "uavnav/error.hpp"

namespace uavnav {

std::string_view difficulty_name(Difficulty d) { return d == Difficulty::Easy ? "easy" : "hard"; }

Difficulty difficulty_from_name(std::string_view name) {
  if (name == "easy") return Difficulty::Easy;
  if (name == "hard") return Difficulty::Hard;
  throw Error(ErrorCode::Parse, "unknown difficulty '" + std::string(name) + "'");
}

Difficulty classify_difficulty(double gt_path_length) {
  return gt_path_length < kHardPathLength ? Difficulty::Easy : Difficulty::Hard;
}

std::string TargetDescription::task_text() const {
  return direction_text + " " + object_text + " " + environment_text;
}

void Episode::validate() const {
  require(!id.empty() && !scene_id.empty(), "episode needs an id and a scene id");
  require(!gt.empty(), "episode " + id + ": empty ground-truth trajectory");
  require(target.is_target, "episode " + id + ": target object must be flagged as target");
  require(!description.direction_text.empty() && !description.object_text.empty() &&
              !description.environment_text.empty(),
          "episode " + id + ": description components must be non-empty");
  require(distance(gt.back().pose.position, target.position) <= kCollectionReach,
          "episode " + id + ": ground truth must end within 5 m of the target");
  require(difficulty == classify_difficulty(path_length(gt)), "episode " + id + ": difficulty label mismatch");
}

namespace {

constexpr std::array<std::pair<Outcome, std::string_view>, 6> kOutcomeNames{{
    {Outcome::Success, "success"},
    {Outcome::Collision, "collision"},
    {Outcome::Timeout, "timeout"},
    {Outcome::LandedFar, "landed_far"},
    {Outcome::ProtocolError, "protocol_error"},
    {Outcome::Errored, "errored"},
}};

}  // namespace

std::string_view outcome_name(Outcome o) {
  for (const auto& [k, n] : kOutcomeNames)
    if (k == o) return n;
  return "errored";
}

Outcome outcome_from_name(std::string_view name) {
  for (const auto& [k, n] : kOutcomeNames)
    if (n == name) return k;
  throw Error(ErrorCode::Parse, "unknown outcome '" + std::string(name) + "'");
}

bool check_success(const Pose& final_pose, const PlacedObject& target, double success_radius) {
  return distance(final_pose.position, target.position) <= success_radius;
}

namespace {

struct Observed {
  Observation obs;
  std::optional<GuidanceAction> guidance;
};

Observed observe(const Scene& scene, const UavState& state, const Episode& episode, const AssistantConfig& assistant,
                 const HarnessConfig& cfg, int step, bool render_images) {
  Observed out;
  Observation& obs = out.obs;
  obs.episode_id = episode.id;
  obs.step_index = step;
  obs.state = state;
  obs.task_text = episode.description.task_text();
  if (render_images || needs_depth(assistant.level)) {
    FrameSet fs = render_all(scene, state.pose, cfg.camera, render_images);
    obs.depths = std::move(fs.depth);
    obs.semantics = std::move(fs.semantic);
  }
  out.guidance = assistant_guidance(state, episode.gt, obs.depths, assistant);
  if (out.guidance) obs.assistant_text = render_instruction(*out.guidance);
  return out;
}

void append_states(Trajectory& traj, const std::vector<UavState>& states, std::size_t first) {
  for (std::size_t i = first; i < states.size(); ++i) traj.append(states[i].time, states[i].pose);
}

}  // namespace

Observation build_observation(const Scene& scene, const UavState& state, const Episode& episode,
                              const AssistantConfig& assistant, const HarnessConfig& cfg, int step,
                              bool render_images) {
  return observe(scene, state, episode, assistant, cfg, step, render_images).obs;
}

Pose clamp_to_bounds(const Pose& p, const Aabb& b) {
  return Pose(Vec3{std::clamp(p.position.x, b.min.x, b.max.x), std::clamp(p.position.y, b.min.y, b.max.y),
                   std::clamp(p.position.z, b.min.z, b.max.z)},
              p.pitch, p.roll, p.yaw);
}

bool segment_clear(const Scene& scene, const Vec3& a, const Vec3& b, double radius) {
  const double len = distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
  for (int k = 0; k <= n; ++k)
    if (scene.collides(a + (b - a) * (static_cast<double>(k) / n), radius)) return false;
  return true;
}

void validate_command(const PolicyCommand& cmd, int max_waypoints) {
  if (cmd.waypoints.empty()) throw Error(ErrorCode::Protocol, "policy returned no waypoints");
  if (static_cast<int>(cmd.waypoints.size()) > max_waypoints)
    throw Error(ErrorCode::Protocol, "policy returned " + std::to_string(cmd.waypoints.size()) +
                                         " waypoints (max " + std::to_string(max_waypoints) + ")");
  for (const auto& p : cmd.waypoints)
    if (!p.finite()) throw Error(ErrorCode::Protocol, "policy returned a non-finite waypoint");
}

std::vector<UavState> land(const UavState& from, const KinematicLimits& limits, const Scene& scene) {
  std::vector<UavState> out;
  VelocityCommand down;
  down.velocity = {0.0, 0.0, -limits.max_vertical_speed};
  UavState cur = from;
  const int budget = static_cast<int>(std::ceil((from.pose.position.z + 10.0) / (limits.max_vertical_speed * limits.dt))) + 200;
  for (int k = 0; k < budget; ++k) {
    const StepResult r = step(cur, down, limits, scene);
    cur = r.state;
    out.push_back(cur);
    if (r.collision) break;
  }
  return out;
}

EpisodeResult run_episode(const Scene& scene, const Episode& episode, Policy& policy, const AssistantConfig& assistant,
                          const HarnessConfig& cfg, uint64_t seed) {
  require(scene.id() == episode.scene_id, "scene '" + scene.id() + "' does not match episode scene '" +
                                              episode.scene_id + "'");
  require(!episode.gt.empty(), "episode has no ground-truth trajectory");
  cfg.limits.validate();

  EpisodeResult result;
  result.episode_id = episode.id;
  UavState state = hover_state(episode.start);
  result.executed.append(state.time, state.pose);
  try {
    policy.reset(episode, seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Protocol) throw;
    result.error = std::string("reset: ") + e.what();
    result.outcome = Outcome::ProtocolError;
    result.final_distance = distance(state.pose.position, episode.target.position);
    return result;
  }
  const bool render_images = policy.needs_images() || cfg.always_render;
  const Vec3 target = episode.target.position;

  auto finish_landing = [&](const UavState& from) {
    const auto states = land(from, cfg.limits, scene);
    append_states(result.executed, states, 0);
    result.landed = true;
    result.final_distance = distance(result.executed.back().pose.position, target);
    result.outcome = result.final_distance <= cfg.success_radius ? Outcome::Success : Outcome::LandedFar;
  };
  auto finish_at = [&](Outcome o) {
    result.outcome = o;
    result.final_distance = distance(result.executed.back().pose.position, target);
  };

  for (int decision = 0;; ++decision) {
    if (cfg.detection_landing &&
        oracle_detect(scene, state.pose, episode.target, cfg.camera, cfg.detection_range)) {
      const Vec3 approach = target + Vec3{0.0, 0.0, cfg.approach_height};
      if (segment_clear(scene, state.pose.position, approach, cfg.limits.collision_radius + 0.5)) {
        const Bearing b = relative_bearing(state.pose, target);
        // The flown path bends away from the straight line under the acceleration
        // limits, so only commit when the simulated approach itself is clear.
        const auto flight = fly_to_waypoint(state, Pose(approach, 0.0, 0.0, state.pose.yaw + b.yaw_offset),
                                            cfg.limits, scene);
        if (!flight.collision) {
          append_states(result.executed, flight.states, 1);
          state = flight.states.back();
          finish_landing(state);
          return result;
        }
      }
    }
    if (decision >= cfg.max_decisions) {
      finish_at(Outcome::Timeout);
      return result;
    }

    Observed o = observe(scene, state, episode, assistant, cfg, decision, render_images);
    if (o.guidance) ++result.assistant_calls[std::string(action_kind_name(o.guidance->kind()))];

    PolicyCommand cmd;
    try {
      cmd = policy.act(o.obs);
      validate_command(cmd, cfg.max_waypoints);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Protocol) throw;
      result.error = "decision " + std::to_string(decision) + ": " + e.what();
      finish_at(Outcome::ProtocolError);
      return result;
    }
    ++result.decisions;

    for (const Pose& wp : cmd.waypoints) {
      const auto flight = fly_to_waypoint(state, clamp_to_bounds(wp, scene.bounds()), cfg.limits, scene);
      append_states(result.executed, flight.states, 1);
      state = flight.states.back();
      if (flight.collision) {
        finish_at(Outcome::Collision);
        return result;
      }
    }
    if (cmd.declare_landing) {
      finish_landing(state);
      return result;
    }
  }
}

}  // namespace uavnav
