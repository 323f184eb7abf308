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
#include "../support/limits_check.hpp"
#include "uavnav/error.hpp"
#include "uavnav/flight.hpp"
#include "uavnav/rng.hpp"

using namespace uavnav;
using doctest::Approx;

TEST_CASE("hover with a zero command is a fixed point") {
  const Scene s = testing::open_scene();
  const KinematicLimits l;
  UavState st = hover_state(Pose(50, 50, 20, 0, 0, 0.4));
  for (int i = 0; i < 20; ++i) {
    const auto r = step(st, {}, l, s);
    CHECK_FALSE(r.collision);
    CHECK(r.state.pose == st.pose);
    CHECK(r.state.velocity == Vec3{});
    st = r.state;
  }
  CHECK(st.time == Approx(2.0));
}

TEST_CASE("forward speed slews at the acceleration limit") {
  const Scene s = testing::open_scene();
  const KinematicLimits l;
  UavState st = hover_state(Pose(50, 200, 20));
  VelocityCommand cmd;
  cmd.velocity = {100, 0, 0};
  cmd.body_frame = true;
  for (int k = 1; k <= 40; ++k) {
    st = step(st, cmd, l, s).state;
    CHECK(st.velocity.norm() == Approx(std::min(k * l.dt * l.max_accel, l.max_horizontal_speed)));
  }
}

TEST_CASE("flying into a wall reports a collision in time and stops short of the face") {
  const Scene w = testing::wall_scene(120);
  const KinematicLimits l;
  UavState st = hover_state(Pose(117, 200, 20));  // 2 m of free space ahead of the body
  VelocityCommand cmd;
  cmd.velocity = {2, 0, 0};
  st.velocity = {2, 0, 0};
  const int bound = static_cast<int>(std::ceil((2.0 / 2.0) / l.dt)) + 1;
  bool collided = false;
  int k = 0;
  for (; k < bound && !collided; ++k) {
    const auto r = step(st, cmd, l, w);
    collided = r.collision;
    st = r.state;
  }
  CHECK(collided);
  CHECK(k <= bound);
  CHECK(st.pose.position.x <= 120 - l.collision_radius + 1e-9);
  CHECK(st.pose.position.x >= 120 - l.collision_radius - l.dt * 2.0);
  CHECK(st.velocity == Vec3{});
}

TEST_CASE("attitude_from_accel examples") {
  const KinematicLimits l;
  auto a = attitude_from_accel(0, 0, 0.3, l);
  CHECK(a.pitch == 0.0);
  CHECK(a.roll == 0.0);
  a = attitude_from_accel(kGravity * std::tan(deg2rad(10)), 0, 0, l);
  CHECK(a.pitch == Approx(-deg2rad(10)));
  CHECK(a.roll == Approx(0).epsilon(1e-12));
  a = attitude_from_accel(0, 2.0, 0, l);  // leftward
  CHECK(a.roll < 0);
  CHECK(a.pitch == Approx(0).epsilon(1e-12));
  // Saturates at the tilt limit.
  a = attitude_from_accel(1000, 0, 0, l);
  CHECK(a.pitch == Approx(-l.max_tilt));
}

TEST_CASE("fly_to_waypoint: target at the current pose") {
  const Scene s = testing::open_scene();
  const UavState st = hover_state(Pose(50, 50, 20));
  const auto f = fly_to_waypoint(st, st.pose, KinematicLimits{}, s);
  CHECK(f.reached);
  CHECK(f.states.size() == 1);
}

TEST_CASE("fly_to_waypoint: 50 m in open space") {
  const Scene s = testing::open_scene();
  const KinematicLimits l;
  const auto f = fly_to_waypoint(hover_state(Pose(50, 50, 20)), Pose(100, 50, 20), l, s);
  REQUIRE(f.reached);
  CHECK_FALSE(f.collision);
  const double elapsed = f.states.back().time - f.states.front().time;
  CHECK(elapsed >= 50 / l.max_horizontal_speed);
  CHECK(elapsed <= 50 / l.max_horizontal_speed * 1.5);
  for (const auto& st : f.states) CHECK(st.velocity.horizontal_norm() <= l.max_horizontal_speed + 1e-9);
  CHECK(distance(f.states.back().pose.position, Vec3{100, 50, 20}) <= l.reach_tolerance);
}

TEST_CASE("fly_to_waypoint: target behind a wall") {
  const Scene w = testing::wall_scene(120);
  const auto f = fly_to_waypoint(hover_state(Pose(100, 200, 20)), Pose(140, 200, 20), KinematicLimits{}, w);
  CHECK(f.collision);
  CHECK_FALSE(f.reached);
}

TEST_CASE("fly_to_waypoint turns to the waypoint yaw") {
  const Scene s = testing::open_scene();
  const auto f = fly_to_waypoint(hover_state(Pose(50, 50, 20)), Pose(80, 50, 20, 0, 0, 1.0), KinematicLimits{}, s);
  REQUIRE(f.reached);
  CHECK(std::abs(f.states.back().pose.yaw - 1.0) < 0.1);
}

TEST_CASE("step rejects non-finite commands and limits validate") {
  const Scene s = testing::open_scene();
  VelocityCommand cmd;
  cmd.velocity = {std::nan(""), 0, 0};
  CHECK_THROWS_AS(step(hover_state(Pose(50, 50, 20)), cmd, KinematicLimits{}, s), Error);
  KinematicLimits bad;
  bad.dt = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("random command fuzzing respects the kinematic limits") {
  SceneConfig cfg;
  cfg.obstacle_density = 0.002;
  const Scene s = generate_scene(3, cfg);
  const KinematicLimits l;
  Rng rng(99);
  UavState st = hover_state(Pose(40, 40, 20));
  int collisions = 0;
  for (int i = 0; i < 10000; ++i) {
    VelocityCommand cmd;
    cmd.velocity = {rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-15, 15)};
    cmd.yaw_rate = rng.uniform(-3, 3);
    cmd.body_frame = rng.bernoulli(0.5);
    const auto r = step(st, cmd, l, s);
    const std::string v = testing::limit_violation(st, r.state, l, r.collision);
    CHECK_MESSAGE(v.empty(), "step ", i, ": ", v);
    st = r.state;
    if (r.collision) {
      ++collisions;
      st = hover_state(Pose(40 + rng.uniform(0, 20), 40 + rng.uniform(0, 20), rng.uniform(5, 40)), st.time);
    }
  }
  CHECK(collisions > 0);
}
