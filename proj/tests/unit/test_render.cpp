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

#include "../oracles/oracles.hpp"
#include "../support/fixtures.hpp"
#include "uavnav/error.hpp"
#include "uavnav/render.hpp"

using namespace uavnav;
using doctest::Approx;

namespace {

std::vector<DepthImage> all_depths(const Scene& s, const Pose& p, int res = 32) {
  CameraConfig cam;
  cam.resolution = res;
  return render_all(s, p, cam, false).depth;
}

}  // namespace

TEST_CASE("down view over flat ground stays within the pinhole bounds") {
  const Scene s = testing::open_scene();
  const double h = 15.0;
  CameraConfig cam;
  cam.resolution = 32;
  const auto d = render_depth(s, Pose(100, 100, h, 0, 0, 0.7), View::Down, cam);
  const double half = std::tan(deg2rad(cam.fov_deg / 2));
  const double corner = h * std::sqrt(1 + 2 * half * half);
  for (float v : d.values) {
    CHECK(v >= h - 1e-4);
    CHECK(v <= corner + 1e-4);
  }
  CHECK(d.at(16, 16) == Approx(h));
}

TEST_CASE("front view into open sky is max range everywhere above the horizon") {
  const Scene s = testing::open_scene();
  CameraConfig cam;
  cam.resolution = 16;
  // Pitched up so the whole frustum is above the horizon.
  const auto d = render_depth(s, Pose(100, 100, 50, deg2rad(50), 0, 0), View::Front, cam);
  for (float v : d.values) CHECK(v == static_cast<float>(cam.max_range));
}

TEST_CASE("front view centre pixel measures a wall head-on") {
  const Scene w = testing::wall_scene(120);
  CameraConfig cam;
  cam.resolution = 64;
  const auto d = render_depth(w, Pose(100, 200, 30, 0, 0, 0), View::Front, cam);
  CHECK(std::abs(d.at(32, 32) - 20.0) <= 0.01);
}

TEST_CASE("pixel rays are unit length and the centre pixel lies on the axis") {
  const CameraBasis b = camera_basis(Pose(0, 0, 0, 0.1, 0.2, 0.3), View::Left);
  const Vec3 r = pixel_ray(b, 10, 10, 20, 90);
  CHECK(r.norm() == Approx(1));
  CHECK(r.dot(b.forward) == Approx(1));
  CHECK(b.forward.dot(b.right) == Approx(0).epsilon(1e-12));
  CHECK(b.forward.cross(b.right).dot(b.up) < 0);  // right-handed with forward x right = -up
}

TEST_CASE("camera rig follows the airframe attitude") {
  const Scene w = testing::wall_scene(120);
  const auto level = render_depth(w, Pose(100, 200, 30), View::Front);
  const auto pitched = render_depth(w, Pose(100, 200, 30, deg2rad(20), 0, 0), View::Front);
  CHECK(level.values != pitched.values);
  // Down view of a yawed airframe still looks straight down.
  CHECK(render_depth(testing::open_scene(), Pose(50, 50, 12, 0, 0, 2.0), View::Down).at(32, 32) == Approx(12));
}

TEST_CASE("render_all semantics label the hit surface") {
  Scene s = testing::wall_scene(120);
  CameraConfig cam;
  cam.resolution = 16;
  const auto fs = render_all(s, Pose(100, 200, 30), cam, true);
  REQUIRE(fs.depth.size() == 5);
  REQUIRE(fs.semantic.size() == 5);
  CHECK(fs.semantic[0].labels[8 * 16 + 8] == static_cast<uint8_t>(Material::Building));
  CHECK(fs.semantic[4].labels[8 * 16 + 8] == static_cast<uint8_t>(Material::Ground));
  for (std::size_t i = 0; i < fs.depth[0].values.size(); ++i)
    CHECK((fs.depth[0].values[i] < cam.max_range) == (fs.semantic[0].labels[i] != 0));
  CHECK_THROWS_AS(render_depth(s, Pose(), View::Front, CameraConfig{4, 90, 100}), Error);
}

TEST_CASE("min_clearance examples") {
  const Scene open = testing::open_scene();
  // High enough that the down view sees nothing within range.
  CHECK(min_clearance(all_depths(open, Pose(100, 100, 110))) == Approx(kDefaultMaxRange));
  CHECK(min_clearance(all_depths(open, Pose(100, 100, 12))) == Approx(12));
  std::vector<DepthImage> four(4);
  CHECK_THROWS_AS(min_clearance(four), Error);
}

TEST_CASE("min_clearance in a canyon matches the analytic nearest surface") {
  const Scene canyon("canyon", 0, "urban", testing::default_bounds(), {20, 20, 60, 60},
                     {testing::box({0, 195, 0}, {400, 200, 80}), testing::box({0, 208, 0}, {400, 213, 80})},
                     {{"r0", {300, 300, 320, 320}}});
  for (double y : {201.0, 203.0, 204.0, 206.0}) {
    const Vec3 p{200, y, 30};
    const double got = min_clearance(all_depths(canyon, Pose(p, 0, 0, 0)));
    const double want = canyon.clearance(p);
    CHECK(std::abs(got - want) <= 0.05 * want);
  }
}

TEST_CASE("oracle_detect examples") {
  Scene s = testing::open_scene();
  const PlacedObject target{"car", {100, 100, 2.5}, 2.5, true};
  s.add_object(target);
  CHECK(oracle_detect(s, Pose(100, 100, 12.5), target));
  CHECK_FALSE(oracle_detect(s, Pose(600, 100, 12.5), target, {}, 100.0));

  Scene hidden("h", 0, "urban", testing::default_bounds(), {20, 20, 60, 60},
               {testing::box({110, 80, 0}, {115, 120, 40})}, {{"r0", {300, 300, 320, 320}}});
  hidden.add_object(target);
  CHECK_FALSE(oracle_detect(hidden, Pose(130, 100, 5, 0, 0, std::numbers::pi), target));
  CHECK(oracle_detect(s, Pose(130, 100, 5, 0, 0, std::numbers::pi), target));
}
