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

#include "uavnav/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavnav/error.hpp"

namespace uavnav {

std::string_view view_name(View v) {
  switch (v) {
    case View::Front: return "front";
    case View::Left: return "left";
    case View::Right: return "right";
    case View::Rear: return "rear";
    case View::Down: return "down";
  }
  return "front";
}

View view_from_name(std::string_view name) {
  for (View v : kAllViews)
    if (view_name(v) == name) return v;
  throw Error(ErrorCode::Parse, "unknown view '" + std::string(name) + "'");
}

CameraBasis camera_basis(const Pose& pose, View view) {
  // Body axes: x forward, y left, z up.
  Vec3 f, u;
  switch (view) {
    case View::Front: f = {1, 0, 0}; u = {0, 0, 1}; break;
    case View::Left: f = {0, 1, 0}; u = {0, 0, 1}; break;
    case View::Right: f = {0, -1, 0}; u = {0, 0, 1}; break;
    case View::Rear: f = {-1, 0, 0}; u = {0, 0, 1}; break;
    case View::Down: f = {0, 0, -1}; u = {1, 0, 0}; break;
  }
  const Mat3 r = attitude_matrix(pose.pitch, pose.roll, pose.yaw);
  const Vec3 fw = r * f, uw = r * u;
  return {fw, fw.cross(uw), uw};
}

Vec3 pixel_ray(const CameraBasis& cam, int row, int col, int res, double fov_deg) {
  const double focal = 0.5 * res / std::tan(0.5 * deg2rad(fov_deg));
  const double px = col - 0.5 * res;
  const double py = 0.5 * res - row;
  return (cam.forward * focal + cam.right * px + cam.up * py).normalized();
}

void render_view(const Scene& scene, const Pose& pose, View view, const CameraConfig& cam, DepthImage& depth,
                 SemanticImage* semantic) {
  require(cam.resolution >= 8, "render resolution must be at least 8");
  const int res = cam.resolution;
  const auto n = static_cast<std::size_t>(res) * res;
  depth = DepthImage{view, res, res, cam.fov_deg, static_cast<float>(cam.max_range), std::vector<float>(n)};
  if (semantic) *semantic = SemanticImage{view, res, res, cam.fov_deg, std::vector<uint8_t>(n, 0)};
  const CameraBasis basis = camera_basis(pose, view);
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * res + col;
      const auto hit = scene.raycast(pose.position, pixel_ray(basis, row, col, res, cam.fov_deg), cam.max_range);
      depth.values[i] = hit ? static_cast<float>(hit->distance) : depth.max_range;
      if (semantic && hit) semantic->labels[i] = hit->semantic_id;
    }
  }
}

DepthImage render_depth(const Scene& scene, const Pose& pose, View view, const CameraConfig& cam) {
  DepthImage d;
  render_view(scene, pose, view, cam, d, nullptr);
  return d;
}

FrameSet render_all(const Scene& scene, const Pose& pose, const CameraConfig& cam, bool with_semantics) {
  FrameSet fs;
  fs.depth.resize(kAllViews.size());
  if (with_semantics) fs.semantic.resize(kAllViews.size());
  for (std::size_t k = 0; k < kAllViews.size(); ++k)
    render_view(scene, pose, kAllViews[k], cam, fs.depth[k], with_semantics ? &fs.semantic[k] : nullptr);
  return fs;
}

double min_clearance(std::span<const DepthImage> depths) {
  require(depths.size() == kAllViews.size(), "min_clearance needs all five views");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : depths)
    for (float v : d.values) best = std::min(best, static_cast<double>(v));
  return best;
}

bool oracle_detect(const Scene& scene, const Pose& pose, const PlacedObject& target, const CameraConfig& cam,
                   double detection_range) {
  const Vec3 d = target.position - pose.position;
  const double range = d.norm();
  if (range > detection_range) return false;
  if (range == 0.0) return true;
  const double half = std::tan(0.5 * deg2rad(cam.fov_deg));
  bool in_frustum = false;
  for (View v : kAllViews) {
    const CameraBasis b = camera_basis(pose, v);
    const double zc = d.dot(b.forward);
    if (zc <= 0.0) continue;
    if (std::abs(d.dot(b.right)) <= half * zc && std::abs(d.dot(b.up)) <= half * zc) {
      in_frustum = true;
      break;
    }
  }
  if (!in_frustum) return false;
  const auto hit = scene.raycast(pose.position, d / range, range, /*include_objects=*/false);
  return !hit;
}

}  // namespace uavnav
