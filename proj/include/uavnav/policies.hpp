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

#include <memory>
#include <optional>
#include <string>

#include "uavnav/episode.hpp"
#include "uavnav/net.hpp"
#include "uavnav/rng.hpp"

namespace uavnav {

enum class PolicyKind { Random, Fixed, Teacher, External };
std::string_view policy_kind_name(PolicyKind k);
PolicyKind policy_kind_from_name(std::string_view name);

struct PolicySpec {
  PolicyKind kind = PolicyKind::Teacher;
  uint64_t seed = 0;
  std::optional<std::string> bridge_endpoint;  // host:port, external only
  int bridge_timeout_ms = 10000;

  void validate() const;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(double step_box = 10.0, double p_land = 0.01) : step_box_(step_box), p_land_(p_land) {}
  void reset(const Episode& episode, uint64_t seed) override;
  PolicyCommand act(const Observation& obs) override;

  // Same sampler with an explicit generator.
  static PolicyCommand sample(const UavState& state, Rng& rng, double step_box, double p_land);

 private:
  double step_box_;
  double p_land_;
  Rng rng_{0};
};

// Fixed-action quanta.
inline constexpr double kFixedForward = 5.0;
inline constexpr double kFixedVertical = 5.0;
inline constexpr double kFixedTurnDeg = 30.0;

// Maps a parsed instruction onto a fixed action; no assistant text means cruise.
PolicyCommand fixed_action(const UavState& state, const std::optional<GuidanceAction>& action);

class FixedPolicy final : public Policy {
 public:
  // Throws ProtocolError(Malformed) on an instruction it cannot parse.
  PolicyCommand act(const Observation& obs) override;
};

class TeacherPolicy final : public Policy {
 public:
  explicit TeacherPolicy(int advance_min = 2, double min_step = 1.0) : advance_min_(advance_min), min_step_(min_step) {}
  void reset(const Episode& episode, uint64_t seed) override;
  PolicyCommand act(const Observation& obs) override;

 private:
  int advance_min_;
  double min_step_;
  Trajectory gt_;
};

// Drives the loop from an external process over a length-prefixed stream.
class BridgePolicy final : public Policy {
 public:
  BridgePolicy(net::Endpoint endpoint, net::Millis timeout);
  void reset(const Episode& episode, uint64_t seed) override;
  PolicyCommand act(const Observation& obs) override;
  bool needs_images() const override { return true; }

 private:
  net::Endpoint endpoint_;
  net::Millis timeout_;
  std::unique_ptr<net::FrameChannel> channel_;
  int max_waypoints_ = 8;
};

// Connection-backed policy used by server bridge sessions: requests go out
// over an already-established channel.
class ChannelPolicy final : public Policy {
 public:
  ChannelPolicy(net::FrameChannel& channel, net::Millis timeout, int max_waypoints = 8)
      : channel_(channel), timeout_(timeout), max_waypoints_(max_waypoints) {}
  PolicyCommand act(const Observation& obs) override;
  bool needs_images() const override { return true; }

 private:
  net::FrameChannel& channel_;
  net::Millis timeout_;
  int max_waypoints_;
};

// One request/response exchange; every failure surfaces as ProtocolError.
PolicyCommand exchange(net::FrameChannel& channel, const Observation& obs, net::Millis timeout, int max_waypoints);

std::unique_ptr<Policy> make_policy(const PolicySpec& spec);

}  // namespace uavnav
