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

#include <vector>

#include "uavnav/geometry.hpp"
#include "uavnav/scene.hpp"

namespace uavnav {

// Every kinematic parameter of the simulated airframe in one block.
struct KinematicLimits {
  double max_horizontal_speed = 10.0;  // m/s
  double max_vertical_speed = 5.0;     // m/s
  double max_yaw_rate = deg2rad(60.0);
  double max_accel = 4.0;  // m/s^2
  double max_tilt = deg2rad(25.0);
  double collision_radius = 1.0;
  double dt = 0.1;
  double reach_tolerance = 0.5;
  double position_gain = 1.0;  // 1/s, waypoint controller
  double yaw_gain = 2.0;       // 1/s
  int max_steps_per_waypoint = 1500;

  void validate() const;
};

inline constexpr double kGravity = 9.80665;

struct UavState {
  Pose pose;
  Vec3 velocity;
  double yaw_rate = 0.0;
  double time = 0.0;

  bool operator==(const UavState&) const = default;
};

UavState hover_state(const Pose& pose, double time = 0.0);

struct VelocityCommand {
  Vec3 velocity;          // world frame, or body frame (forward, left, up) when body_frame
  double yaw_rate = 0.0;  // rad/s, counter-clockwise
  bool body_frame = false;
};

struct StepResult {
  UavState state;
  bool collision = false;
};

StepResult step(const UavState& state, const VelocityCommand& cmd, const KinematicLimits& limits, const Scene& scene);

struct Attitude {
  double pitch = 0.0;
  double roll = 0.0;
};

// World-frame horizontal acceleration to airframe tilt: forward acceleration
// pitches the nose down, acceleration to the right rolls right.
Attitude attitude_from_accel(double ax, double ay, double yaw, const KinematicLimits& limits);

// One tick of the waypoint controller.
VelocityCommand waypoint_command(const UavState& state, const Pose& target, const KinematicLimits& limits);

struct WaypointFlight {
  std::vector<UavState> states;  // states[0] is the initial state
  bool reached = false;
  bool collision = false;
};

WaypointFlight fly_to_waypoint(const UavState& state, const Pose& target, const KinematicLimits& limits,
                               const Scene& scene);

}  // namespace uavnav
