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

#include <doctest.h>

#include <cstring>

#include "../support/fixtures.hpp"
#include "uavnav/error.hpp"
#include "uavnav/rng.hpp"
#include "uavnav/serialization.hpp"
#include "uavnav/wire.hpp"

using namespace uavnav;

namespace {

Observation sample_observation() {
  SceneConfig cfg;
  cfg.obstacle_density = 0.003;
  Scene s = generate_scene(4, cfg, "s");
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {300, 300, 2.5});
  CameraConfig cam;
  cam.resolution = 16;
  HarnessConfig h;
  h.camera = cam;
  return build_observation(s, hover_state(Pose(40, 40, 10, 0, 0, 0.7)), e, AssistantConfig{}, h, 3, true);
}

}  // namespace

TEST_CASE("base64 round-trips arbitrary bytes") {
  Rng rng(1);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 100, 1001}) {
    std::vector<uint8_t> bytes(n);
    for (auto& b : bytes) b = static_cast<uint8_t>(rng.below(256));
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
  }
  const std::vector<uint8_t> foo{'f', 'o', 'o', 'b'};
  CHECK(base64_encode(foo) == "Zm9vYg==");
  CHECK_THROWS_AS(base64_decode("@@@"), Error);
}

TEST_CASE("scene JSON round-trip preserves every field") {
  for (auto style : {SceneStyle::Urban, SceneStyle::Forest, SceneStyle::Open}) {
    SceneConfig cfg;
    cfg.style = style;
    Scene s = generate_scene(21, cfg, "rt");
    s.add_object({"tent", {100, 100, 2}, 2.0, false});
    const Scene back = scene_from_json(scene_to_json(s));
    CHECK(back == s);
    CHECK(dump_canonical(scene_to_json(back)) == dump_canonical(scene_to_json(s)));
  }
  json bad = scene_to_json(testing::open_scene());
  bad["version"] = 99;
  CHECK_THROWS_AS(scene_from_json(bad), Error);
}

TEST_CASE("episode and result JSON round-trips") {
  const Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e1", s, {40, 40, 10}, {300, 300, 2.5});
  CHECK(json(e).get<Episode>() == e);

  EpisodeResult r;
  r.episode_id = "e1";
  r.executed = e.gt;
  r.outcome = Outcome::LandedFar;
  r.final_distance = 1.0 / 3.0;
  r.landed = true;
  r.assistant_calls = {{"cruise", 3}, {"turn_left", 1}};
  r.decisions = 4;
  r.error = "none";
  CHECK(json(r).get<EpisodeResult>() == r);
  CHECK(json::parse(json(r).dump()).get<EpisodeResult>() == r);
}

TEST_CASE("canonical dump is stable under key order") {
  const json a = json::parse(R"({"b":1,"a":{"y":2,"x":[1,2]}})");
  const json b = json::parse(R"({"a":{"x":[1,2],"y":2},"b":1})");
  CHECK(dump_canonical(a) == dump_canonical(b));
}

TEST_CASE("observation wire round-trip keeps depth grids bit-identical") {
  const Observation obs = sample_observation();
  REQUIRE(obs.depths.size() == 5);
  const json wire = json::parse(observation_to_wire(obs).dump());
  CHECK(wire.at("v") == kWireVersion);
  const Observation back = observation_from_wire(wire);
  CHECK(back.episode_id == obs.episode_id);
  CHECK(back.step_index == 3);
  CHECK(back.state == obs.state);
  CHECK(back.task_text == obs.task_text);
  CHECK(back.assistant_text == obs.assistant_text);
  REQUIRE(back.depths.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(back.depths[k] == obs.depths[k]);
    CHECK(back.semantics[k] == obs.semantics[k]);
    CHECK(std::memcmp(back.depths[k].values.data(), obs.depths[k].values.data(),
                      obs.depths[k].values.size() * sizeof(float)) == 0);
  }
}

TEST_CASE("command wire validation") {
  PolicyCommand cmd{{Pose(1, 2, 3, 0, 0, 0.5), Pose(4, 5, 6)}, true};
  CHECK(command_from_wire(json::parse(command_to_wire(cmd).dump()), 8).waypoints == cmd.waypoints);

  auto fault_of = [](const json& j) {
    try {
      command_from_wire(j, 8);
    } catch (const ProtocolError& e) {
      return e.fault();
    }
    FAIL("expected a protocol error");
    return ProtocolFault::Connection;
  };
  CHECK(fault_of(json::array()) == ProtocolFault::Malformed);
  CHECK(fault_of({{"v", 2}, {"waypoints", json::array()}}) == ProtocolFault::VersionMismatch);
  json nine = command_to_wire(PolicyCommand{std::vector<Pose>(9, Pose(1, 1, 1)), false});
  CHECK(fault_of(nine) == ProtocolFault::Validation);
  CHECK(fault_of({{"v", 1}, {"waypoints", json::array()}}) == ProtocolFault::Validation);
  CHECK(fault_of({{"v", 1}, {"waypoints", json::array({{{"x", 1}, {"y", 2}}})}}) == ProtocolFault::Validation);
  CHECK(fault_of({{"v", 1}, {"waypoints", "nope"}}) == ProtocolFault::Malformed);
  CHECK(fault_of({{"v", 1}}) == ProtocolFault::Malformed);
}

TEST_CASE("downsample picks nearest source pixels") {
  DepthImage d{View::Front, 8, 8, 90.0, 100.0f, {}};
  for (int i = 0; i < 64; ++i) d.values.push_back(static_cast<float>(i));
  const DepthImage s = downsample(d, 4);
  CHECK(s.width == 4);
  CHECK(s.values.size() == 16);
  CHECK(s.at(1, 1) == d.at(2, 2));
  CHECK(s.at(3, 2) == d.at(6, 4));
  CHECK(downsample(d, 16) == d);
}

TEST_CASE("json file helpers") {
  testing::TempDir dir;
  write_text_file(dir / "a/b.json", R"({"k": 1})");
  CHECK(read_json_file(dir / "a/b.json").at("k") == 1);
  write_text_file(dir / "l.jsonl", "{\"a\":1}\n\n{\"a\":2}\n");
  CHECK(read_jsonl_file(dir / "l.jsonl").size() == 2);
  CHECK_THROWS_AS(read_json_file(dir / "missing.json"), Error);
  write_text_file(dir / "bad.json", "{");
  try {
    read_json_file(dir / "bad.json");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
}
