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

#include "../support/fixtures.hpp"
#include "../support/stub_bridge.hpp"
#include "uavnav/error.hpp"
#include "uavnav/policies.hpp"
#include "uavnav/wire.hpp"

using namespace uavnav;
using doctest::Approx;

namespace {

Observation obs_at(const Pose& p, std::optional<std::string> text = std::nullopt) {
  Observation o;
  o.episode_id = "e";
  o.state = hover_state(p);
  o.assistant_text = std::move(text);
  return o;
}

}  // namespace

TEST_CASE("random policy is seeded and unbiased") {
  const Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {300, 300, 2.5});
  RandomPolicy a, b;
  a.reset(e, 5);
  b.reset(e, 5);
  const Observation o = obs_at(Pose(100, 100, 20));
  for (int i = 0; i < 50; ++i) {
    const auto ca = a.act(o), cb = b.act(o);
    CHECK(ca.waypoints == cb.waypoints);
    CHECK(ca.declare_landing == cb.declare_landing);
  }

  Rng rng(1);
  Vec3 sum;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto c = RandomPolicy::sample(o.state, rng, 10.0, 0.0);
    REQUIRE(c.waypoints.size() == 1);
    CHECK_FALSE(c.declare_landing);
    sum += c.waypoints[0].position;
  }
  CHECK(distance(sum / n, o.state.pose.position) < 0.5);
}

TEST_CASE("fixed policy action mapping") {
  const Pose origin(0, 0, 0, 0, 0, 0);
  auto c = FixedPolicy().act(obs_at(origin, "cruise forward"));
  REQUIRE(c.waypoints.size() == 1);
  CHECK(distance(c.waypoints[0].position, Vec3{5, 0, 0}) < 1e-12);
  CHECK(c.waypoints[0].yaw == 0.0);

  c = FixedPolicy().act(obs_at(origin, "turn left about 30 degrees"));
  CHECK(c.waypoints[0].yaw == Approx(deg2rad(30)));
  CHECK(distance(c.waypoints[0].position, Vec3{5 * std::cos(deg2rad(30)), 5 * std::sin(deg2rad(30)), 0}) < 1e-12);

  c = FixedPolicy().act(obs_at(origin, "turn right about 75 degrees"));
  CHECK(c.waypoints[0].yaw == Approx(-deg2rad(30)));

  c = FixedPolicy().act(obs_at(origin, "ascend about 12 meters"));
  CHECK(c.waypoints[0].position == Vec3{0, 0, 5});
  c = FixedPolicy().act(obs_at(Pose(0, 0, 20), "descend about 3 meters"));
  CHECK(c.waypoints[0].position == Vec3{0, 0, 15});
  c = FixedPolicy().act(obs_at(origin, "obstacle ahead, move left"));
  CHECK(distance(c.waypoints[0].position, Vec3{0, 5, 0}) < 1e-12);
  c = FixedPolicy().act(obs_at(origin, "obstacle ahead, move right"));
  CHECK(distance(c.waypoints[0].position, Vec3{0, -5, 0}) < 1e-12);

  c = FixedPolicy().act(obs_at(origin, "descend and land at the target"));
  CHECK(c.declare_landing);

  c = FixedPolicy().act(obs_at(origin));
  CHECK(distance(c.waypoints[0].position, Vec3{5, 0, 0}) < 1e-12);

  CHECK_THROWS_AS(FixedPolicy().act(obs_at(origin, "do a barrel roll")), ProtocolError);
}

TEST_CASE("teacher policy follows the GT and lands at its end") {
  const Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {140, 40, 2.5});
  TeacherPolicy t(2);
  t.reset(e, 0);
  auto c = t.act(obs_at(e.gt[0].pose));
  CHECK(c.waypoints[0] == e.gt[2].pose);
  CHECK_FALSE(c.declare_landing);
  c = t.act(obs_at(e.gt.back().pose));
  CHECK(c.declare_landing);
  TeacherPolicy fresh;
  CHECK_THROWS_AS(fresh.act(obs_at(e.gt[0].pose)), Error);
}

TEST_CASE("teacher lands when the GT ends in closely spaced samples") {
  const Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {140.3, 40, 2.5});
  REQUIRE(distance(e.gt[e.gt.size() - 2].pose.position, e.gt.back().pose.position) < 0.5);
  TeacherPolicy t;
  t.reset(e, 0);
  // Nearer to the second-to-last sample but within reach of the last one.
  Pose p = e.gt.back().pose;
  p.position.x -= 0.45;
  const auto c = t.act(obs_at(p));
  CHECK(c.declare_landing);
}

TEST_CASE("policy specs") {
  PolicySpec spec;
  CHECK_NOTHROW(spec.validate());
  spec.kind = PolicyKind::External;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.bridge_endpoint = "127.0.0.1:1";
  CHECK_NOTHROW(spec.validate());
  for (auto k : {PolicyKind::Random, PolicyKind::Fixed, PolicyKind::Teacher})
    CHECK(make_policy(PolicySpec{k, 0, std::nullopt, 1000}) != nullptr);
  CHECK(policy_kind_from_name("fixed") == PolicyKind::Fixed);
  CHECK_THROWS_AS(policy_kind_from_name("gpt"), Error);
}

TEST_CASE("bridge: echo of the current pose runs to timeout") {
  testing::StubBridge stub([](const json& obs) -> std::optional<std::string> {
    json pose = obs.at("state").at("pose");
    return json{{"v", 1}, {"waypoints", json::array({pose})}, {"declare_landing", false}}.dump();
  });
  Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {300, 300, 2.5});
  BridgePolicy p(stub.endpoint(), net::Millis(2000));
  HarnessConfig cfg;
  cfg.max_decisions = 6;
  cfg.camera.resolution = 16;
  const auto r = run_episode(s, e, p, AssistantConfig{}, cfg, 1);
  CHECK(r.outcome == Outcome::Timeout);
  CHECK(r.decisions == 6);
  CHECK(stub.requests() == 6);
}

TEST_CASE("bridge: nine waypoints is a protocol error") {
  testing::StubBridge stub([](const json& obs) -> std::optional<std::string> {
    const json pose = obs.at("state").at("pose");
    return json{{"v", 1}, {"waypoints", std::vector<json>(9, pose)}, {"declare_landing", false}}.dump();
  });
  Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {300, 300, 2.5});
  BridgePolicy p(stub.endpoint(), net::Millis(2000));
  HarnessConfig cfg;
  cfg.camera.resolution = 16;
  const auto r = run_episode(s, e, p, AssistantConfig{}, cfg, 1);
  CHECK(r.outcome == Outcome::ProtocolError);
  CHECK(r.decisions == 0);
}

TEST_CASE("bridge: silence, garbage and refused connections") {
  Scene s = testing::open_scene();
  const Episode e = testing::straight_episode("e", s, {40, 40, 10}, {300, 300, 2.5});
  HarnessConfig cfg;
  cfg.camera.resolution = 16;
  {
    testing::StubBridge silent([](const json&) -> std::optional<std::string> { return std::nullopt; });
    BridgePolicy p(silent.endpoint(), net::Millis(150));
    const auto r = run_episode(s, e, p, AssistantConfig{}, cfg, 1);
    CHECK(r.outcome == Outcome::ProtocolError);
    CHECK(r.error.find("did not answer") != std::string::npos);
  }
  {
    testing::StubBridge garbage([](const json&) -> std::optional<std::string> { return "not json"; });
    BridgePolicy p(garbage.endpoint(), net::Millis(2000));
    CHECK(run_episode(s, e, p, AssistantConfig{}, cfg, 1).outcome == Outcome::ProtocolError);
  }
  uint16_t port = 0;
  {
    net::Listener gone(net::Endpoint{"127.0.0.1", 0});
    port = gone.port();
  }
  BridgePolicy p(net::Endpoint{"127.0.0.1", port}, net::Millis(300));
  const auto r = run_episode(s, e, p, AssistantConfig{}, cfg, 1);
  CHECK(r.outcome == Outcome::ProtocolError);
  CHECK(r.error.find("reset") == 0);
}
