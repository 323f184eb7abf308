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

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uavnav/geometry.hpp"
#include "uavnav/scene.hpp"

namespace uavnav {

enum class View : uint8_t { Front = 0, Left = 1, Right = 2, Rear = 3, Down = 4 };
inline constexpr std::array<View, 5> kAllViews{View::Front, View::Left, View::Right, View::Rear, View::Down};

std::string_view view_name(View v);
View view_from_name(std::string_view name);

struct CameraConfig {
  int resolution = 64;
  double fov_deg = 90.0;  // horizontal and vertical (square images)
  double max_range = kDefaultMaxRange;
};

// Ranges along each pixel ray in meters, row-major, row 0 at the top.
// Pixels that hit nothing hold exactly max_range.
struct DepthImage {
  View view = View::Front;
  int width = 0;
  int height = 0;
  double fov_deg = 90.0;
  float max_range = static_cast<float>(kDefaultMaxRange);
  std::vector<float> values;

  float at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  bool operator==(const DepthImage&) const = default;
};

// Semantic labels (Material or object semantic id), 0 = no hit.
struct SemanticImage {
  View view = View::Front;
  int width = 0;
  int height = 0;
  double fov_deg = 90.0;
  std::vector<uint8_t> labels;

  bool operator==(const SemanticImage&) const = default;
};

struct FrameSet {
  std::vector<DepthImage> depth;        // one per view, kAllViews order
  std::vector<SemanticImage> semantic;  // empty when semantics were not requested
  bool operator==(const FrameSet&) const = default;
};

// Camera basis in world coordinates for a view rigidly attached to the airframe.
struct CameraBasis {
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};
CameraBasis camera_basis(const Pose& pose, View view);

// Unit ray through pixel (row, col). Pixel (res/2, res/2) lies on the axis.
Vec3 pixel_ray(const CameraBasis& cam, int row, int col, int res, double fov_deg);

DepthImage render_depth(const Scene& scene, const Pose& pose, View view, const CameraConfig& cam = {});
void render_view(const Scene& scene, const Pose& pose, View view, const CameraConfig& cam, DepthImage& depth,
                 SemanticImage* semantic);
FrameSet render_all(const Scene& scene, const Pose& pose, const CameraConfig& cam, bool with_semantics);

// Minimum over all pixels of all five views.
double min_clearance(std::span<const DepthImage> depths);

bool oracle_detect(const Scene& scene, const Pose& pose, const PlacedObject& target, const CameraConfig& cam = {},
                   double detection_range = 50.0);

}  // namespace uavnav
