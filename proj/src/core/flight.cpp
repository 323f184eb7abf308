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

#include "uavnav/flight.hpp"

#include <algorithm>
#include <cmath>

#include "uavnav/error.hpp"

namespace uavnav {

void KinematicLimits::validate() const {
  require(max_horizontal_speed > 0 && max_vertical_speed > 0 && max_yaw_rate > 0 && max_accel > 0 && max_tilt > 0 &&
              collision_radius > 0 && dt > 0 && reach_tolerance > 0,
          "kinematic limits must be strictly positive");
}

UavState hover_state(const Pose& pose, double time) {
  UavState s;
  s.pose = Pose(pose.position, 0.0, 0.0, pose.yaw);
  s.time = time;
  return s;
}

Attitude attitude_from_accel(double ax, double ay, double yaw, const KinematicLimits& limits) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double forward = c * ax + s * ay;
  const double right = s * ax - c * ay;
  const double tilt = limits.max_tilt;
  return {-std::clamp(std::atan(forward / kGravity), -tilt, tilt), std::clamp(std::atan(right / kGravity), -tilt, tilt)};
}

namespace {

Vec3 clamp_velocity(Vec3 v, const KinematicLimits& l) {
  const double h = v.horizontal_norm();
  if (h > l.max_horizontal_speed) {
    v.x *= l.max_horizontal_speed / h;
    v.y *= l.max_horizontal_speed / h;
  }
  v.z = std::clamp(v.z, -l.max_vertical_speed, l.max_vertical_speed);
  return v;
}

// Last collision-free point on [from, to], resolved to 1 cm.
Vec3 last_free_point(const Scene& scene, const Vec3& from, const Vec3& to, double radius) {
  if (scene.collides(from, radius)) return from;
  double lo = 0.0, hi = 1.0;
  const double len = distance(from, to);
  while ((hi - lo) * len > 0.01) {
    const double mid = 0.5 * (lo + hi);
    if (scene.collides(from + (to - from) * mid, radius)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return from + (to - from) * lo;
}

}  // namespace

StepResult step(const UavState& state, const VelocityCommand& cmd, const KinematicLimits& l, const Scene& scene) {
  require(cmd.velocity.finite() && std::isfinite(cmd.yaw_rate), "velocity command must be finite");
  Vec3 desired = cmd.velocity;
  if (cmd.body_frame) {
    const double c = std::cos(state.pose.yaw), s = std::sin(state.pose.yaw);
    desired = {c * cmd.velocity.x - s * cmd.velocity.y, s * cmd.velocity.x + c * cmd.velocity.y, cmd.velocity.z};
  }
  desired = clamp_velocity(desired, l);

  Vec3 dv = desired - state.velocity;
  const double max_dv = l.max_accel * l.dt;
  if (dv.norm() > max_dv) dv = dv * (max_dv / dv.norm());
  const Vec3 v_new = clamp_velocity(state.velocity + dv, l);
  const Vec3 accel = (v_new - state.velocity) / l.dt;
  const double yaw_rate = std::clamp(cmd.yaw_rate, -l.max_yaw_rate, l.max_yaw_rate);
  const double yaw = normalize_angle(state.pose.yaw + yaw_rate * l.dt);
  const Attitude att = attitude_from_accel(accel.x, accel.y, yaw, l);

  StepResult out;
  out.state.time = state.time + l.dt;
  const Vec3 from = state.pose.position;
  const Vec3 to = from + v_new * l.dt;

  // Sub-sample long steps so thin obstacles cannot be skipped.
  const double len = distance(from, to);
  const int n_sub = std::max(1, static_cast<int>(std::ceil(len / (0.5 * l.collision_radius))));
  Vec3 prev = from;
  for (int k = 1; k <= n_sub; ++k) {
    const Vec3 p = from + (to - from) * (static_cast<double>(k) / n_sub);
    if (scene.collides(p, l.collision_radius)) {
      out.collision = true;
      out.state.pose = Pose(last_free_point(scene, prev, p, l.collision_radius), 0.0, 0.0, yaw);
      out.state.velocity = {};
      out.state.yaw_rate = 0.0;
      return out;
    }
    prev = p;
  }
  out.state.pose = Pose(to, att.pitch, att.roll, yaw);
  out.state.velocity = v_new;
  out.state.yaw_rate = yaw_rate;
  return out;
}

VelocityCommand waypoint_command(const UavState& state, const Pose& target, const KinematicLimits& l) {
  const Vec3 err = target.position - state.pose.position;
  const double d = err.norm();
  VelocityCommand cmd;
  if (d > 0.0) {
    const double speed = l.position_gain * d;
    cmd.velocity = clamp_velocity(err * (speed / d), l);
  }
  cmd.yaw_rate = std::clamp(l.yaw_gain * normalize_angle(target.yaw - state.pose.yaw), -l.max_yaw_rate, l.max_yaw_rate);
  return cmd;
}

WaypointFlight fly_to_waypoint(const UavState& state, const Pose& target, const KinematicLimits& l,
                               const Scene& scene) {
  require(target.finite(), "waypoint must be finite");
  WaypointFlight out;
  out.states.push_back(state);
  UavState cur = state;
  for (int k = 0; k < l.max_steps_per_waypoint; ++k) {
    if (distance(cur.pose.position, target.position) <= l.reach_tolerance) {
      out.reached = true;
      return out;
    }
    const StepResult r = step(cur, waypoint_command(cur, target, l), l, scene);
    cur = r.state;
    out.states.push_back(cur);
    if (r.collision) {
      out.collision = true;
      return out;
    }
  }
  out.reached = distance(cur.pose.position, target.position) <= l.reach_tolerance;
  return out;
}

}  // namespace uavnav
