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

#include "uavnav/serialization.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "uavnav/error.hpp"

namespace uavnav {

void to_json(json& j, const Vec3& v) { j = json::array({v.x, v.y, v.z}); }

void from_json(const json& j, Vec3& v) {
  require(j.is_array() && j.size() == 3, "expected [x, y, z]", ErrorCode::Parse);
  v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void to_json(json& j, const Pose& p) {
  j = json{{"x", p.position.x}, {"y", p.position.y}, {"z", p.position.z},
           {"pitch", p.pitch},   {"roll", p.roll},     {"yaw", p.yaw}};
}

void from_json(const json& j, Pose& p) {
  p = Pose(j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>(), j.value("pitch", 0.0),
           j.value("roll", 0.0), j.value("yaw", 0.0));
}

void to_json(json& j, const Trajectory& t) {
  j = json::array();
  for (const auto& p : t.points()) {
    json e = p.pose;
    e["t"] = p.time;
    j.push_back(std::move(e));
  }
}

void from_json(const json& j, Trajectory& t) {
  t = Trajectory();
  for (const auto& e : j) t.append(e.at("t").get<double>(), e.get<Pose>());
}

void to_json(json& j, const UavState& s) {
  j = json{{"pose", s.pose}, {"velocity", s.velocity}, {"yaw_rate", s.yaw_rate}, {"time", s.time}};
}

void from_json(const json& j, UavState& s) {
  s.pose = j.at("pose").get<Pose>();
  s.velocity = j.value("velocity", Vec3{});
  s.yaw_rate = j.value("yaw_rate", 0.0);
  s.time = j.value("time", 0.0);
}

void to_json(json& j, const Rect& r) { j = json::array({r.x0, r.y0, r.x1, r.y1}); }

void from_json(const json& j, Rect& r) {
  require(j.is_array() && j.size() == 4, "expected [x0, y0, x1, y1]", ErrorCode::Parse);
  r = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

void to_json(json& j, const PlacedObject& o) {
  j = json{{"category", o.category},
           {"position", o.position},
           {"bounding_radius", o.bounding_radius},
           {"is_target", o.is_target}};
}

void from_json(const json& j, PlacedObject& o) {
  o.category = j.at("category").get<std::string>();
  o.position = j.at("position").get<Vec3>();
  o.bounding_radius = j.at("bounding_radius").get<double>();
  o.is_target = j.value("is_target", false);
}

void to_json(json& j, const Obstacle& o) {
  j = std::visit(
      [](const auto& sh) -> json {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          return {{"type", "box"}, {"min", sh.min}, {"max", sh.max}};
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          return {{"type", "cylinder"}, {"center", {sh.cx, sh.cy}}, {"radius", sh.radius},
                  {"z_min", sh.z_min},  {"z_max", sh.z_max}};
        } else {
          return {{"type", "heightfield"}, {"area", sh.area}, {"nx", sh.nx}, {"ny", sh.ny}, {"heights", sh.heights}};
        }
      },
      o.shape);
  j["material"] = material_name(o.material);
}

void from_json(const json& j, Obstacle& o) {
  const auto type = j.at("type").get<std::string>();
  o.material = material_from_name(j.at("material").get<std::string>());
  if (type == "box") {
    o.shape = BoxShape{j.at("min").get<Vec3>(), j.at("max").get<Vec3>()};
  } else if (type == "cylinder") {
    const auto& c = j.at("center");
    o.shape = CylinderShape{c.at(0).get<double>(), c.at(1).get<double>(), j.at("radius").get<double>(),
                            j.at("z_min").get<double>(), j.at("z_max").get<double>()};
  } else if (type == "heightfield") {
    HeightfieldShape h;
    h.area = j.at("area").get<Rect>();
    h.nx = j.at("nx").get<int>();
    h.ny = j.at("ny").get<int>();
    h.heights = j.at("heights").get<std::vector<double>>();
    require(h.nx > 0 && h.ny > 0 && h.heights.size() == static_cast<std::size_t>(h.nx) * h.ny,
            "heightfield size mismatch", ErrorCode::Parse);
    o.shape = std::move(h);
  } else {
    throw Error(ErrorCode::Parse, "unknown obstacle type '" + type + "'");
  }
}

void to_json(json& j, const TargetDescription& d) {
  j = json{{"direction", d.direction_text}, {"object", d.object_text}, {"environment", d.environment_text}};
}

void from_json(const json& j, TargetDescription& d) {
  d.direction_text = j.at("direction").get<std::string>();
  d.object_text = j.at("object").get<std::string>();
  d.environment_text = j.at("environment").get<std::string>();
}

void to_json(json& j, const Episode& e) {
  j = json{{"version", kEpisodeSchemaVersion},
           {"id", e.id},
           {"scene_id", e.scene_id},
           {"start", e.start},
           {"description", e.description},
           {"gt", e.gt},
           {"target", e.target},
           {"difficulty", difficulty_name(e.difficulty)}};
}

void from_json(const json& j, Episode& e) {
  require(j.value("version", 0) == kEpisodeSchemaVersion, "unsupported episode schema version", ErrorCode::Parse);
  e.id = j.at("id").get<std::string>();
  e.scene_id = j.at("scene_id").get<std::string>();
  e.start = j.at("start").get<Pose>();
  e.description = j.at("description").get<TargetDescription>();
  e.gt = j.at("gt").get<Trajectory>();
  e.target = j.at("target").get<PlacedObject>();
  e.difficulty = difficulty_from_name(j.at("difficulty").get<std::string>());
}

void to_json(json& j, const EpisodeResult& r) {
  j = json{{"version", kResultSchemaVersion},
           {"episode_id", r.episode_id},
           {"outcome", outcome_name(r.outcome)},
           {"final_distance", r.final_distance},
           {"landed", r.landed},
           {"assistant_calls", r.assistant_calls},
           {"decisions", r.decisions},
           {"error", r.error},
           {"executed", r.executed}};
}

void from_json(const json& j, EpisodeResult& r) {
  require(j.value("version", 0) == kResultSchemaVersion, "unsupported result schema version", ErrorCode::Parse);
  r.episode_id = j.at("episode_id").get<std::string>();
  r.outcome = outcome_from_name(j.at("outcome").get<std::string>());
  r.final_distance = j.at("final_distance").get<double>();
  r.landed = j.value("landed", false);
  r.assistant_calls = j.value("assistant_calls", std::map<std::string, int>{});
  r.decisions = j.value("decisions", 0);
  r.error = j.value("error", std::string{});
  r.executed = j.at("executed").get<Trajectory>();
}

void to_json(json& j, const MetricRow& r) {
  j = json{{"n", r.n}, {"ne", r.ne}, {"sr", r.sr}, {"osr", r.osr}, {"spl", r.spl}};
}

void from_json(const json& j, MetricRow& r) {
  r.n = j.at("n").get<std::size_t>();
  r.ne = j.at("ne").get<double>();
  r.sr = j.at("sr").get<double>();
  r.osr = j.at("osr").get<double>();
  r.spl = j.at("spl").get<double>();
}

void to_json(json& j, const MetricReport& r) {
  j = json{{"n_episodes", r.n_episodes}, {"full", r.full}, {"easy", r.easy}, {"hard", r.hard}};
}

void from_json(const json& j, MetricReport& r) {
  r.n_episodes = j.at("n_episodes").get<std::size_t>();
  r.full = j.at("full").get<MetricRow>();
  r.easy = j.at("easy").get<MetricRow>();
  r.hard = j.at("hard").get<MetricRow>();
}

json scene_to_json(const Scene& s) {
  json regions = json::array();
  for (const auto& r : s.feasible_regions()) regions.push_back({{"name", r.name}, {"area", r.area}});
  return json{{"version", kSceneSchemaVersion},
              {"id", s.id()},
              {"seed", s.seed()},
              {"style", s.style()},
              {"bounds", {{"min", s.bounds().min}, {"max", s.bounds().max}}},
              {"start_region", s.start_region()},
              {"obstacles", s.obstacles()},
              {"feasible_regions", std::move(regions)},
              {"objects", s.objects()}};
}

Scene scene_from_json(const json& j) {
  require(j.value("version", 0) == kSceneSchemaVersion, "unsupported scene schema version", ErrorCode::Parse);
  std::vector<FeasibleRegion> regions;
  for (const auto& r : j.at("feasible_regions"))
    regions.push_back({r.at("name").get<std::string>(), r.at("area").get<Rect>()});
  return Scene(j.at("id").get<std::string>(), j.at("seed").get<uint64_t>(), j.at("style").get<std::string>(),
               Aabb{j.at("bounds").at("min").get<Vec3>(), j.at("bounds").at("max").get<Vec3>()},
               j.at("start_region").get<Rect>(), j.at("obstacles").get<std::vector<Obstacle>>(), std::move(regions),
               j.at("objects").get<std::vector<PlacedObject>>());
}

std::string dump_canonical(const json& j) { return j.dump(); }

std::string base64_encode(std::span<const uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<uint8_t> base64_decode(std::string_view text) {
  require(text.size() % 4 == 0, "base64 length must be a multiple of 4", ErrorCode::Parse);
  std::vector<uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  require(n >= 0, "invalid base64", ErrorCode::Parse);
  // EVP_DecodeBlock counts padding as zero bytes.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<json> read_jsonl_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace uavnav
