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

#include "uavnav/geometry.hpp"

#include <cmath>

#include "uavnav/error.hpp"

namespace uavnav {

double normalize_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

Pose::Pose(const Vec3& p, double pitch_, double roll_, double yaw_)
    : position(p), pitch(normalize_angle(pitch_)), roll(normalize_angle(roll_)), yaw(normalize_angle(yaw_)) {}

Pose::Pose(double x, double y, double z, double pitch_, double roll_, double yaw_)
    : Pose(Vec3{x, y, z}, pitch_, roll_, yaw_) {}

bool Pose::finite() const {
  return position.finite() && std::isfinite(pitch) && std::isfinite(roll) && std::isfinite(yaw);
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
  return r;
}

Mat3 attitude_matrix(double pitch, double roll, double yaw) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  // Nose-up pitch is a negative rotation about the body left axis.
  const double cp = std::cos(-pitch), sp = std::sin(-pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  Mat3 rz, ry, rx;
  rz.m[0][0] = cy; rz.m[0][1] = -sy; rz.m[1][0] = sy; rz.m[1][1] = cy;
  ry.m[0][0] = cp; ry.m[0][2] = sp; ry.m[2][0] = -sp; ry.m[2][2] = cp;
  rx.m[1][1] = cr; rx.m[1][2] = -sr; rx.m[2][1] = sr; rx.m[2][2] = cr;
  return rz * ry * rx;
}

Trajectory::Trajectory(std::vector<TrajectoryPoint> points) {
  points_.reserve(points.size());
  for (const auto& p : points) append(p.time, p.pose);
}

void Trajectory::append(double time, const Pose& pose) {
  require(std::isfinite(time) && pose.finite(), "trajectory point must be finite");
  require(points_.empty() || time > points_.back().time, "trajectory timestamps must be strictly increasing");
  points_.push_back({time, pose});
}

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

double distance(const Pose& a, const Pose& b) { return distance(a.position, b.position); }

NearestPoint nearest_gt_point(const Trajectory& traj, const Vec3& p) {
  require(!traj.empty(), "nearest_gt_point: empty trajectory");
  NearestPoint best{0, distance(traj[0].pose.position, p)};
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double d = distance(traj[i].pose.position, p);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

double path_length(const Trajectory& traj) {
  double total = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) total += distance(traj[i - 1].pose, traj[i].pose);
  return total;
}

double path_length(std::span<const Vec3> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

Bearing relative_bearing(const Pose& from, const Vec3& to_point) {
  const Vec3 d = to_point - from.position;
  Bearing b;
  b.vertical_offset = d.z;
  b.horizontal_distance = std::hypot(d.x, d.y);
  b.yaw_offset = b.horizontal_distance > 0.0 ? normalize_angle(std::atan2(d.y, d.x) - from.yaw) : 0.0;
  return b;
}

}  // namespace uavnav
