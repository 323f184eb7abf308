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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace uavnav {

// World frame is right-handed with z up. Yaw is measured counter-clockwise
// from +x. Body frame is forward-left-up: positive pitch raises the nose,
// positive roll lowers the right side.

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
  double norm() const { return std::sqrt(dot(*this)); }
  double horizontal_norm() const { return std::hypot(x, y); }
  Vec3 normalized() const {
    const double n = norm();
    return n > 0.0 ? *this / n : Vec3{};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Maps any finite angle into (-pi, pi]. Idempotent.
double normalize_angle(double a);

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

struct Pose {
  Vec3 position;
  double pitch = 0.0;
  double roll = 0.0;
  double yaw = 0.0;

  Pose() = default;
  Pose(const Vec3& p, double pitch_, double roll_, double yaw_);
  Pose(double x, double y, double z, double pitch_ = 0.0, double roll_ = 0.0, double yaw_ = 0.0);

  bool finite() const;
  bool operator==(const Pose&) const = default;
};

// Row-major 3x3 rotation.
struct Mat3 {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
};

// Body-to-world rotation for the attitude of a pose.
Mat3 attitude_matrix(double pitch, double roll, double yaw);

struct TrajectoryPoint {
  double time = 0.0;
  Pose pose;
  bool operator==(const TrajectoryPoint&) const = default;
};

// Ordered, strictly increasing timestamps.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectoryPoint> points);

  void append(double time, const Pose& pose);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const TrajectoryPoint& operator[](std::size_t i) const { return points_[i]; }
  const TrajectoryPoint& back() const { return points_.back(); }
  std::span<const TrajectoryPoint> points() const { return points_; }

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<TrajectoryPoint> points_;
};

struct NearestPoint {
  std::size_t index = 0;
  double distance = 0.0;
};

struct Bearing {
  double yaw_offset = 0.0;       // (-pi, pi], positive = target to the left
  double vertical_offset = 0.0;  // target z minus own z
  double horizontal_distance = 0.0;
};

double distance(const Vec3& a, const Vec3& b);
double distance(const Pose& a, const Pose& b);
NearestPoint nearest_gt_point(const Trajectory& traj, const Vec3& p);
inline NearestPoint nearest_gt_point(const Trajectory& traj, const Pose& p) { return nearest_gt_point(traj, p.position); }
double path_length(const Trajectory& traj);
double path_length(std::span<const Vec3> points);
Bearing relative_bearing(const Pose& from, const Vec3& to_point);

}  // namespace uavnav
