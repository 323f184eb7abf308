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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "uavnav/flight.hpp"
#include "uavnav/geometry.hpp"
#include "uavnav/render.hpp"

namespace uavnav {

enum class ActionKind { Cruise, TurnLeft, TurnRight, Ascend, Descend, AvoidLeft, AvoidRight, AvoidUp, Land };

std::string_view action_kind_name(ActionKind k);
ActionKind action_kind_from_name(std::string_view name);

// Magnitude is present exactly for turns (radians) and climbs (meters).
class GuidanceAction {
 public:
  static GuidanceAction cruise() { return GuidanceAction(ActionKind::Cruise, std::nullopt); }
  static GuidanceAction land() { return GuidanceAction(ActionKind::Land, std::nullopt); }
  static GuidanceAction avoid(ActionKind k);
  static GuidanceAction turn(ActionKind k, double radians);
  static GuidanceAction climb(ActionKind k, double meters);
  static GuidanceAction make(ActionKind k, std::optional<double> magnitude);

  ActionKind kind() const { return kind_; }
  std::optional<double> magnitude() const { return magnitude_; }
  bool operator==(const GuidanceAction&) const = default;

 private:
  GuidanceAction(ActionKind k, std::optional<double> m) : kind_(k), magnitude_(m) {}
  ActionKind kind_;
  std::optional<double> magnitude_;
};

bool takes_magnitude(ActionKind k);

enum class AssistLevel { None, L1, L2, L3 };
std::string_view assist_level_name(AssistLevel l);
AssistLevel assist_level_from_name(std::string_view name);

struct AssistantConfig {
  AssistLevel level = AssistLevel::L1;
  double yaw_tolerance = deg2rad(15.0);
  double vertical_tolerance = 3.0;
  double deviation_threshold = 15.0;
  double clearance_threshold = 8.0;
  double landing_radius = 20.0;
  int lookahead_k = 2;

  void validate(double success_radius = 20.0) const;
};

GuidanceAction classify_action(const UavState& state, const Vec3& goal, bool goal_is_final, const AssistantConfig& cfg);

GuidanceAction l1_guidance(const UavState& state, const Trajectory& gt, const AssistantConfig& cfg);

// Avoidance takes priority when the depth clearance is below threshold; then a
// correction toward the nearest ground-truth sample when off the path.
std::optional<GuidanceAction> l2_guidance(const UavState& state, const Trajectory& gt,
                                          std::span<const DepthImage> depths, const AssistantConfig& cfg);

std::optional<GuidanceAction> l3_guidance(std::span<const DepthImage> depths, const AssistantConfig& cfg);

// Dispatch on cfg.level; depth views are only read by L2 and L3.
std::optional<GuidanceAction> assistant_guidance(const UavState& state, const Trajectory& gt,
                                                 std::span<const DepthImage> depths, const AssistantConfig& cfg);

inline bool needs_depth(AssistLevel l) { return l == AssistLevel::L2 || l == AssistLevel::L3; }

std::string render_instruction(const GuidanceAction& action);
std::optional<GuidanceAction> parse_instruction(std::string_view text);

}  // namespace uavnav
