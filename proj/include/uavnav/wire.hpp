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

#include "uavnav/episode.hpp"
#include "uavnav/serialization.hpp"

namespace uavnav {

// Version of the policy bridge and server message schema.
inline constexpr int kWireVersion = 1;

json depth_to_wire(const DepthImage& d);
DepthImage depth_from_wire(const json& j);
json semantic_to_wire(const SemanticImage& s);
SemanticImage semantic_from_wire(const json& j);

// Request document: {v, episode_id, step, state, task_text, assistant_text?,
// depth[], semantic[], semantic_channel, downsampled}.
json observation_to_wire(const Observation& obs, bool downsampled = false);
Observation observation_from_wire(const json& j);

// Response document: {v, waypoints[], declare_landing}.
json command_to_wire(const PolicyCommand& cmd);
// Throws ProtocolError (VersionMismatch, Malformed or Validation).
PolicyCommand command_from_wire(const json& j, int max_waypoints);

// Nearest-neighbour downsampling used for bandwidth-limited streams.
DepthImage downsample(const DepthImage& d, int res);
SemanticImage downsample(const SemanticImage& s, int res);

}  // namespace uavnav
