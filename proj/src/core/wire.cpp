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

#include "uavnav/wire.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "uavnav/error.hpp"

namespace uavnav {

namespace {

std::vector<uint8_t> floats_to_le(const std::vector<float>& v) {
  std::vector<uint8_t> out(v.size() * 4);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto bits = std::bit_cast<uint32_t>(v[i]);
    for (int b = 0; b < 4; ++b) out[4 * i + b] = static_cast<uint8_t>(bits >> (8 * b));
  }
  return out;
}

std::vector<float> floats_from_le(const std::vector<uint8_t>& bytes) {
  require(bytes.size() % 4 == 0, "f32 payload length must be a multiple of 4", ErrorCode::Parse);
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<uint32_t>(bytes[4 * i + b]) << (8 * b);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

}  // namespace

json depth_to_wire(const DepthImage& d) {
  return {{"view", view_name(d.view)}, {"w", d.width},         {"h", d.height},
          {"fov", d.fov_deg},          {"dtype", "f32le"},     {"max_range", d.max_range},
          {"data_b64", base64_encode(floats_to_le(d.values))}};
}

DepthImage depth_from_wire(const json& j) {
  require(j.at("dtype").get<std::string>() == "f32le", "depth dtype must be f32le", ErrorCode::Parse);
  DepthImage d;
  d.view = view_from_name(j.at("view").get<std::string>());
  d.width = j.at("w").get<int>();
  d.height = j.at("h").get<int>();
  d.fov_deg = j.at("fov").get<double>();
  d.max_range = j.value("max_range", static_cast<float>(kDefaultMaxRange));
  d.values = floats_from_le(base64_decode(j.at("data_b64").get<std::string>()));
  require(d.values.size() == static_cast<std::size_t>(d.width) * d.height, "depth payload size mismatch",
          ErrorCode::Parse);
  return d;
}

json semantic_to_wire(const SemanticImage& s) {
  return {{"view", view_name(s.view)}, {"w", s.width},   {"h", s.height},
          {"fov", s.fov_deg},          {"dtype", "u8"}, {"data_b64", base64_encode(s.labels)}};
}

SemanticImage semantic_from_wire(const json& j) {
  require(j.at("dtype").get<std::string>() == "u8", "semantic dtype must be u8", ErrorCode::Parse);
  SemanticImage s;
  s.view = view_from_name(j.at("view").get<std::string>());
  s.width = j.at("w").get<int>();
  s.height = j.at("h").get<int>();
  s.fov_deg = j.at("fov").get<double>();
  s.labels = base64_decode(j.at("data_b64").get<std::string>());
  require(s.labels.size() == static_cast<std::size_t>(s.width) * s.height, "semantic payload size mismatch",
          ErrorCode::Parse);
  return s;
}

json observation_to_wire(const Observation& obs, bool downsampled) {
  json depth = json::array(), semantic = json::array();
  for (const auto& d : obs.depths) depth.push_back(depth_to_wire(d));
  for (const auto& s : obs.semantics) semantic.push_back(semantic_to_wire(s));
  json j{{"v", kWireVersion},
         {"episode_id", obs.episode_id},
         {"step", obs.step_index},
         {"state", obs.state},
         {"task_text", obs.task_text},
         {"depth", std::move(depth)},
         {"semantic", std::move(semantic)},
         {"semantic_channel", "material_id"},
         {"downsampled", downsampled}};
  if (obs.assistant_text) j["assistant_text"] = *obs.assistant_text;
  return j;
}

Observation observation_from_wire(const json& j) {
  require(j.at("v").get<int>() == kWireVersion, "observation schema version mismatch", ErrorCode::Parse);
  Observation obs;
  obs.episode_id = j.at("episode_id").get<std::string>();
  obs.step_index = j.at("step").get<int>();
  obs.state = j.at("state").get<UavState>();
  obs.task_text = j.at("task_text").get<std::string>();
  if (j.contains("assistant_text") && !j["assistant_text"].is_null())
    obs.assistant_text = j["assistant_text"].get<std::string>();
  for (const auto& d : j.at("depth")) obs.depths.push_back(depth_from_wire(d));
  for (const auto& s : j.at("semantic")) obs.semantics.push_back(semantic_from_wire(s));
  return obs;
}

json command_to_wire(const PolicyCommand& cmd) {
  return {{"v", kWireVersion}, {"waypoints", cmd.waypoints}, {"declare_landing", cmd.declare_landing}};
}

PolicyCommand command_from_wire(const json& j, int max_waypoints) {
  if (!j.is_object() || !j.contains("v") || !j["v"].is_number_integer())
    throw ProtocolError(ProtocolFault::Malformed, "response is not a versioned object");
  if (j["v"].get<int>() != kWireVersion)
    throw ProtocolError(ProtocolFault::VersionMismatch,
                        "response version " + std::to_string(j["v"].get<int>()) + " != " + std::to_string(kWireVersion));
  PolicyCommand cmd;
  try {
    const auto& wps = j.at("waypoints");
    if (!wps.is_array()) throw ProtocolError(ProtocolFault::Malformed, "waypoints must be an array");
    for (const auto& w : wps) {
      for (const char* key : {"x", "y", "z", "pitch", "roll", "yaw"}) {
        if (!w.contains(key) || !w[key].is_number())
          throw ProtocolError(ProtocolFault::Validation, std::string("waypoint field '") + key + "' missing or non-finite");
      }
      Pose p(w["x"].get<double>(), w["y"].get<double>(), w["z"].get<double>(), w["pitch"].get<double>(),
             w["roll"].get<double>(), w["yaw"].get<double>());
      cmd.waypoints.push_back(p);
    }
    cmd.declare_landing = j.value("declare_landing", false);
  } catch (const json::exception& e) {
    throw ProtocolError(ProtocolFault::Malformed, std::string("malformed response: ") + e.what());
  }
  try {
    validate_command(cmd, max_waypoints);
  } catch (const Error& e) {
    throw ProtocolError(ProtocolFault::Validation, e.what());
  }
  return cmd;
}

DepthImage downsample(const DepthImage& d, int res) {
  if (res >= d.width) return d;
  DepthImage out{d.view, res, res, d.fov_deg, d.max_range, std::vector<float>(static_cast<std::size_t>(res) * res)};
  for (int r = 0; r < res; ++r)
    for (int c = 0; c < res; ++c) out.values[static_cast<std::size_t>(r) * res + c] = d.at(r * d.height / res, c * d.width / res);
  return out;
}

SemanticImage downsample(const SemanticImage& s, int res) {
  if (res >= s.width) return s;
  SemanticImage out{s.view, res, res, s.fov_deg, std::vector<uint8_t>(static_cast<std::size_t>(res) * res)};
  for (int r = 0; r < res; ++r)
    for (int c = 0; c < res; ++c)
      out.labels[static_cast<std::size_t>(r) * res + c] =
          s.labels[static_cast<std::size_t>(r * s.height / res) * s.width + c * s.width / res];
  return out;
}

}  // namespace uavnav
