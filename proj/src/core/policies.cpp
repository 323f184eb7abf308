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

#include "uavnav/policies.hpp"

#include <cmath>
#include <numbers>

#include "uavnav/error.hpp"
#include "uavnav/wire.hpp"

namespace uavnav {

std::string_view policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Random:
      return "random";
    case PolicyKind::Fixed:
      return "fixed";
    case PolicyKind::Teacher:
      return "teacher";
    case PolicyKind::External:
      return "external";
  }
  return "teacher";
}

PolicyKind policy_kind_from_name(std::string_view name) {
  for (PolicyKind k : {PolicyKind::Random, PolicyKind::Fixed, PolicyKind::Teacher, PolicyKind::External})
    if (policy_kind_name(k) == name) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown policy '" + std::string(name) + "'");
}

void PolicySpec::validate() const {
  require(bridge_endpoint.has_value() == (kind == PolicyKind::External),
          "a bridge endpoint is required for, and only for, the external policy");
  require(bridge_timeout_ms > 0, "bridge timeout must be positive");
}

void RandomPolicy::reset(const Episode&, uint64_t seed) { rng_ = Rng(seed); }

PolicyCommand RandomPolicy::sample(const UavState& state, Rng& rng, double step_box, double p_land) {
  const Vec3& p = state.pose.position;
  const double x = rng.uniform(p.x - step_box, p.x + step_box);
  const double y = rng.uniform(p.y - step_box, p.y + step_box);
  const double z = rng.uniform(p.z - step_box, p.z + step_box);
  const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
  PolicyCommand cmd;
  cmd.waypoints.emplace_back(Vec3{x, y, z}, 0.0, 0.0, yaw);
  cmd.declare_landing = rng.bernoulli(p_land);
  return cmd;
}

PolicyCommand RandomPolicy::act(const Observation& obs) { return sample(obs.state, rng_, step_box_, p_land_); }

PolicyCommand fixed_action(const UavState& state, const std::optional<GuidanceAction>& action) {
  const Pose& cur = state.pose;
  const ActionKind kind = action ? action->kind() : ActionKind::Cruise;
  double yaw = cur.yaw;
  Vec3 offset;
  auto heading = [](double a) { return Vec3{std::cos(a), std::sin(a), 0.0}; };
  switch (kind) {
    case ActionKind::Cruise:
      offset = heading(yaw) * kFixedForward;
      break;
    case ActionKind::TurnLeft:
    case ActionKind::TurnRight:
      yaw += (kind == ActionKind::TurnLeft ? 1.0 : -1.0) * deg2rad(kFixedTurnDeg);
      offset = heading(yaw) * kFixedForward;
      break;
    case ActionKind::Ascend:
    case ActionKind::AvoidUp:
      offset = {0.0, 0.0, kFixedVertical};
      break;
    case ActionKind::Descend:
      offset = {0.0, 0.0, -kFixedVertical};
      break;
    case ActionKind::AvoidLeft:
      offset = heading(yaw + std::numbers::pi / 2) * kFixedForward;
      break;
    case ActionKind::AvoidRight:
      offset = heading(yaw - std::numbers::pi / 2) * kFixedForward;
      break;
    case ActionKind::Land: {
      PolicyCommand cmd;
      cmd.waypoints.emplace_back(cur.position, 0.0, 0.0, cur.yaw);
      cmd.declare_landing = true;
      return cmd;
    }
  }
  PolicyCommand cmd;
  cmd.waypoints.emplace_back(cur.position + offset, 0.0, 0.0, yaw);
  return cmd;
}

PolicyCommand FixedPolicy::act(const Observation& obs) {
  std::optional<GuidanceAction> action;
  if (obs.assistant_text) {
    action = parse_instruction(*obs.assistant_text);
    if (!action) throw ProtocolError(ProtocolFault::Malformed, "unparseable instruction '" + *obs.assistant_text + "'");
  }
  return fixed_action(obs.state, action);
}

void TeacherPolicy::reset(const Episode& episode, uint64_t) { gt_ = episode.gt; }

PolicyCommand TeacherPolicy::act(const Observation& obs) {
  require(!gt_.empty(), "teacher policy used before reset");
  const std::size_t last = gt_.size() - 1;
  const std::size_t nearest = nearest_gt_point(gt_, obs.state.pose).index;
  PolicyCommand cmd;
  if (nearest == last) {
    cmd.waypoints.push_back(gt_.back().pose);
    cmd.declare_landing = true;
    return cmd;
  }
  // Dense samples around GT corners can sit within the reach tolerance.
  std::size_t next = std::min(last, nearest + static_cast<std::size_t>(advance_min_));
  while (next < last && distance(gt_[next].pose.position, obs.state.pose.position) <= min_step_) ++next;
  cmd.waypoints.push_back(gt_[next].pose);
  // Already at the end even though an earlier sample is nearer.
  if (next == last && distance(gt_[last].pose.position, obs.state.pose.position) <= min_step_)
    cmd.declare_landing = true;
  return cmd;
}

PolicyCommand exchange(net::FrameChannel& channel, const Observation& obs, net::Millis timeout, int max_waypoints) {
  std::optional<std::string> reply;
  try {
    channel.send(observation_to_wire(obs).dump());
    reply = channel.receive(timeout);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Protocol) throw;
    throw ProtocolError(ProtocolFault::Connection, std::string("bridge connection failed: ") + e.what());
  }
  if (!reply) throw ProtocolError(ProtocolFault::Timeout, "bridge did not answer within " +
                                                             std::to_string(timeout.count()) + " ms");
  json doc = json::parse(*reply, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ProtocolError(ProtocolFault::Malformed, "bridge reply is not valid JSON");
  return command_from_wire(doc, max_waypoints);
}

BridgePolicy::BridgePolicy(net::Endpoint endpoint, net::Millis timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

void BridgePolicy::reset(const Episode&, uint64_t) {
  if (channel_) return;
  try {
    channel_ = net::connect_length_prefixed(endpoint_, timeout_);
  } catch (const Error& e) {
    throw ProtocolError(ProtocolFault::Connection, e.what());
  }
}

PolicyCommand BridgePolicy::act(const Observation& obs) {
  if (!channel_) throw ProtocolError(ProtocolFault::Connection, "bridge is not connected to " + endpoint_.str());
  try {
    return exchange(*channel_, obs, timeout_, max_waypoints_);
  } catch (const ProtocolError&) {
    // The stream may hold a late reply; start the next episode on a fresh connection.
    channel_.reset();
    throw;
  }
}

PolicyCommand ChannelPolicy::act(const Observation& obs) { return exchange(channel_, obs, timeout_, max_waypoints_); }

std::unique_ptr<Policy> make_policy(const PolicySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case PolicyKind::Random:
      return std::make_unique<RandomPolicy>();
    case PolicyKind::Fixed:
      return std::make_unique<FixedPolicy>();
    case PolicyKind::Teacher:
      return std::make_unique<TeacherPolicy>();
    case PolicyKind::External:
      return std::make_unique<BridgePolicy>(net::Endpoint::parse(*spec.bridge_endpoint),
                                            net::Millis(spec.bridge_timeout_ms));
  }
  throw Error(ErrorCode::Internal, "unreachable policy kind");
}

}  // namespace uavnav
