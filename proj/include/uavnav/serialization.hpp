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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uavnav/episode.hpp"
#include "uavnav/metrics.hpp"
#include "uavnav/scene.hpp"

namespace uavnav {

using json = nlohmann::json;

inline constexpr int kSceneSchemaVersion = 1;
inline constexpr int kEpisodeSchemaVersion = 1;
inline constexpr int kResultSchemaVersion = 1;

void to_json(json& j, const Vec3& v);
void from_json(const json& j, Vec3& v);
void to_json(json& j, const Pose& p);
void from_json(const json& j, Pose& p);
void to_json(json& j, const Trajectory& t);
void from_json(const json& j, Trajectory& t);
void to_json(json& j, const UavState& s);
void from_json(const json& j, UavState& s);
void to_json(json& j, const Rect& r);
void from_json(const json& j, Rect& r);
void to_json(json& j, const PlacedObject& o);
void from_json(const json& j, PlacedObject& o);
void to_json(json& j, const Obstacle& o);
void from_json(const json& j, Obstacle& o);
void to_json(json& j, const TargetDescription& d);
void from_json(const json& j, TargetDescription& d);
void to_json(json& j, const Episode& e);
void from_json(const json& j, Episode& e);
void to_json(json& j, const EpisodeResult& r);
void from_json(const json& j, EpisodeResult& r);
void to_json(json& j, const MetricRow& r);
void to_json(json& j, const MetricReport& r);
void from_json(const json& j, MetricRow& r);
void from_json(const json& j, MetricReport& r);

json scene_to_json(const Scene& scene);
Scene scene_from_json(const json& j);

// Canonical text form used for files and hashing.
std::string dump_canonical(const json& j);

std::string base64_encode(std::span<const uint8_t> bytes);
std::vector<uint8_t> base64_decode(std::string_view text);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::vector<json> read_jsonl_file(const std::filesystem::path& path);

}  // namespace uavnav
