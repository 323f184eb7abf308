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

#include "uavnav/assistant.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "uavnav/error.hpp"

namespace uavnav {

namespace {

constexpr std::array<std::pair<ActionKind, std::string_view>, 9> kKindNames{{
    {ActionKind::Cruise, "cruise"},
    {ActionKind::TurnLeft, "turn_left"},
    {ActionKind::TurnRight, "turn_right"},
    {ActionKind::Ascend, "ascend"},
    {ActionKind::Descend, "descend"},
    {ActionKind::AvoidLeft, "avoid_left"},
    {ActionKind::AvoidRight, "avoid_right"},
    {ActionKind::AvoidUp, "avoid_up"},
    {ActionKind::Land, "land"},
}};

}  // namespace

std::string_view action_kind_name(ActionKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "cruise";
}

ActionKind action_kind_from_name(std::string_view name) {
  for (const auto& [kind, n] : kKindNames)
    if (n == name) return kind;
  throw Error(ErrorCode::Parse, "unknown action kind '" + std::string(name) + "'");
}

bool takes_magnitude(ActionKind k) {
  return k == ActionKind::TurnLeft || k == ActionKind::TurnRight || k == ActionKind::Ascend ||
         k == ActionKind::Descend;
}

GuidanceAction GuidanceAction::avoid(ActionKind k) {
  require(k == ActionKind::AvoidLeft || k == ActionKind::AvoidRight || k == ActionKind::AvoidUp,
          "not an avoidance action");
  return GuidanceAction(k, std::nullopt);
}

GuidanceAction GuidanceAction::turn(ActionKind k, double radians) {
  require(k == ActionKind::TurnLeft || k == ActionKind::TurnRight, "not a turn action");
  require(std::isfinite(radians) && radians >= 0.0, "turn magnitude must be finite and non-negative");
  return GuidanceAction(k, radians);
}

GuidanceAction GuidanceAction::climb(ActionKind k, double meters) {
  require(k == ActionKind::Ascend || k == ActionKind::Descend, "not a climb action");
  require(std::isfinite(meters) && meters >= 0.0, "climb magnitude must be finite and non-negative");
  return GuidanceAction(k, meters);
}

GuidanceAction GuidanceAction::make(ActionKind k, std::optional<double> magnitude) {
  require(takes_magnitude(k) == magnitude.has_value(), "magnitude present iff the action is a turn or climb");
  return GuidanceAction(k, magnitude);
}

std::string_view assist_level_name(AssistLevel l) {
  switch (l) {
    case AssistLevel::None: return "none";
    case AssistLevel::L1: return "L1";
    case AssistLevel::L2: return "L2";
    case AssistLevel::L3: return "L3";
  }
  return "none";
}

AssistLevel assist_level_from_name(std::string_view name) {
  for (auto l : {AssistLevel::None, AssistLevel::L1, AssistLevel::L2, AssistLevel::L3})
    if (assist_level_name(l) == name) return l;
  if (name == "l1") return AssistLevel::L1;
  if (name == "l2") return AssistLevel::L2;
  if (name == "l3") return AssistLevel::L3;
  throw Error(ErrorCode::InvalidArgument, "unknown assistant level '" + std::string(name) + "'");
}

void AssistantConfig::validate(double success_radius) const {
  require(yaw_tolerance > 0 && vertical_tolerance > 0 && deviation_threshold > 0 && clearance_threshold > 0 &&
              landing_radius > 0,
          "assistant thresholds must be positive");
  require(landing_radius <= success_radius, "landing radius must not exceed the success radius");
  require(lookahead_k >= 0, "lookahead must be non-negative");
}

GuidanceAction classify_action(const UavState& state, const Vec3& goal, bool goal_is_final, const AssistantConfig& cfg) {
  const Bearing b = relative_bearing(state.pose, goal);
  if (goal_is_final && b.horizontal_distance <= cfg.landing_radius) return GuidanceAction::land();
  if (std::abs(b.vertical_offset) > cfg.vertical_tolerance)
    return GuidanceAction::climb(b.vertical_offset > 0 ? ActionKind::Ascend : ActionKind::Descend,
                                 std::abs(b.vertical_offset));
  if (std::abs(b.yaw_offset) > cfg.yaw_tolerance)
    return GuidanceAction::turn(b.yaw_offset > 0 ? ActionKind::TurnLeft : ActionKind::TurnRight,
                                std::abs(b.yaw_offset));
  return GuidanceAction::cruise();
}

GuidanceAction l1_guidance(const UavState& state, const Trajectory& gt, const AssistantConfig& cfg) {
  const NearestPoint near = nearest_gt_point(gt, state.pose.position);
  const std::size_t last = gt.size() - 1;
  const std::size_t goal = std::min(near.index + static_cast<std::size_t>(cfg.lookahead_k), last);
  return classify_action(state, gt[goal].pose.position, goal == last, cfg);
}

namespace {

double mean_depth(const DepthImage& d, int row_begin, int row_end) {
  double sum = 0.0;
  std::size_t n = 0;
  for (int r = row_begin; r < row_end; ++r)
    for (int c = 0; c < d.width; ++c, ++n) sum += d.at(r, c);
  return n ? sum / static_cast<double>(n) : 0.0;
}

const DepthImage& view_of(std::span<const DepthImage> depths, View v) {
  for (const auto& d : depths)
    if (d.view == v) return d;
  throw Error(ErrorCode::InvalidArgument, "missing depth view '" + std::string(view_name(v)) + "'");
}

// Escape scores: full left/right views, and the upper halves of the four
// horizontal views for climbing. Ties prefer up, then left.
GuidanceAction escape_action(std::span<const DepthImage> depths) {
  const DepthImage& left = view_of(depths, View::Left);
  const DepthImage& right = view_of(depths, View::Right);
  double up = 0.0;
  for (View v : {View::Front, View::Left, View::Right, View::Rear}) {
    const DepthImage& d = view_of(depths, v);
    up += mean_depth(d, 0, d.height / 2);
  }
  up /= 4.0;
  const double l = mean_depth(left, 0, left.height);
  const double r = mean_depth(right, 0, right.height);
  if (up >= l && up >= r) return GuidanceAction::avoid(ActionKind::AvoidUp);
  if (l >= r) return GuidanceAction::avoid(ActionKind::AvoidLeft);
  return GuidanceAction::avoid(ActionKind::AvoidRight);
}

}  // namespace

std::optional<GuidanceAction> l3_guidance(std::span<const DepthImage> depths, const AssistantConfig& cfg) {
  if (min_clearance(depths) >= cfg.clearance_threshold) return std::nullopt;
  return escape_action(depths);
}

std::optional<GuidanceAction> l2_guidance(const UavState& state, const Trajectory& gt,
                                          std::span<const DepthImage> depths, const AssistantConfig& cfg) {
  if (auto avoid = l3_guidance(depths, cfg)) return avoid;
  const NearestPoint near = nearest_gt_point(gt, state.pose.position);
  if (near.distance <= cfg.deviation_threshold) return std::nullopt;
  return classify_action(state, gt[near.index].pose.position, near.index == gt.size() - 1, cfg);
}

std::optional<GuidanceAction> assistant_guidance(const UavState& state, const Trajectory& gt,
                                                 std::span<const DepthImage> depths, const AssistantConfig& cfg) {
  switch (cfg.level) {
    case AssistLevel::None: return std::nullopt;
    case AssistLevel::L1: return l1_guidance(state, gt, cfg);
    case AssistLevel::L2: return l2_guidance(state, gt, depths, cfg);
    case AssistLevel::L3: return l3_guidance(depths, cfg);
  }
  return std::nullopt;
}

std::string render_instruction(const GuidanceAction& a) {
  const long rounded = a.magnitude() ? std::lround(a.kind() == ActionKind::TurnLeft || a.kind() == ActionKind::TurnRight
                                                       ? rad2deg(*a.magnitude())
                                                       : *a.magnitude())
                                     : 0;
  switch (a.kind()) {
    case ActionKind::Cruise: return "cruise forward";
    case ActionKind::TurnLeft: return "turn left about " + std::to_string(rounded) + " degrees";
    case ActionKind::TurnRight: return "turn right about " + std::to_string(rounded) + " degrees";
    case ActionKind::Ascend: return "ascend about " + std::to_string(rounded) + " meters";
    case ActionKind::Descend: return "descend about " + std::to_string(rounded) + " meters";
    case ActionKind::AvoidLeft: return "obstacle ahead, move left";
    case ActionKind::AvoidRight: return "obstacle ahead, move right";
    case ActionKind::AvoidUp: return "obstacle ahead, move up";
    case ActionKind::Land: return "descend and land at the target";
  }
  return "cruise forward";
}

std::optional<GuidanceAction> parse_instruction(std::string_view text) {
  const std::string s(text);
  if (s == "cruise forward") return GuidanceAction::cruise();
  if (s == "descend and land at the target") return GuidanceAction::land();
  if (s == "obstacle ahead, move left") return GuidanceAction::avoid(ActionKind::AvoidLeft);
  if (s == "obstacle ahead, move right") return GuidanceAction::avoid(ActionKind::AvoidRight);
  if (s == "obstacle ahead, move up") return GuidanceAction::avoid(ActionKind::AvoidUp);

  long value = 0;
  int consumed = 0;
  struct Pattern {
    const char* fmt;
    ActionKind kind;
  };
  for (const Pattern& p : {Pattern{"turn left about %ld degrees%n", ActionKind::TurnLeft},
                           Pattern{"turn right about %ld degrees%n", ActionKind::TurnRight},
                           Pattern{"ascend about %ld meters%n", ActionKind::Ascend},
                           Pattern{"descend about %ld meters%n", ActionKind::Descend}}) {
    consumed = 0;
    if (std::sscanf(s.c_str(), p.fmt, &value, &consumed) == 1 && consumed == static_cast<int>(s.size()) && value >= 0) {
      const bool turn = p.kind == ActionKind::TurnLeft || p.kind == ActionKind::TurnRight;
      return turn ? GuidanceAction::turn(p.kind, deg2rad(static_cast<double>(value)))
                  : GuidanceAction::climb(p.kind, static_cast<double>(value));
    }
  }
  return std::nullopt;
}

}  // namespace uavnav
