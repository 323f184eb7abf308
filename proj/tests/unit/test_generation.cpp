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
#include "uavnav/generation.hpp"
#include "uavnav/serialization.hpp"

using namespace uavnav;
using doctest::Approx;

namespace {

bool same_scene(const Scene& a, const Scene& b) { return scene_to_json(a) == scene_to_json(b); }

bool polyline_clear(const Scene& s, const std::vector<Vec3>& pts, double margin) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double len = distance(pts[i - 1], pts[i]);
    const int n = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
    for (int k = 0; k <= n; ++k) {
      const Vec3 p = pts[i - 1] + (pts[i] - pts[i - 1]) * (static_cast<double>(k) / n);
      if (s.collides(p, margin)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("plan_path routes around a wall with a gap") {
  Scene s("gap", 0, "urban", testing::default_bounds(), {20, 20, 60, 60},
          {testing::box({200, 0, 0}, {204, 180, 100}), testing::box({200, 220, 0}, {204, 400, 100})},
          {{"r0", {300, 300, 320, 320}}});
  const auto path = plan_path(s, {100, 100, 20}, {300, 100, 20}, 20, 4, 6, 4);
  REQUIRE(path);
  CHECK(path->front().x == Approx(100));
  CHECK(path->back().x == Approx(300));
  for (const auto& p : *path) CHECK(p.z == 20);
  CHECK(polyline_clear(s, *path, 3.0));
  // The detour through the gap at y 180..220 is at least 2 * hypot(100, 80) long.
  double len = 0;
  for (std::size_t i = 1; i < path->size(); ++i) len += oracle::euclid((*path)[i - 1], (*path)[i]);
  CHECK(len > 260.0);

  const auto straight = plan_path(testing::open_scene(), {100, 100, 20}, {300, 100, 20}, 20, 4, 6, 4);
  REQUIRE(straight);
  CHECK(straight->size() == 2);
}

TEST_CASE("plan_path fails when the goal is walled off") {
  Scene s("closed", 0, "urban", testing::default_bounds(), {20, 20, 60, 60},
          {testing::box({200, 0, 0}, {204, 400, 100})}, {{"r0", {300, 300, 320, 320}}});
  CHECK_FALSE(plan_path(s, {100, 100, 20}, {300, 100, 20}, 20, 4, 6, 4));
}

TEST_CASE("ground truth flights end above the target and respect timing") {
  Scene s = testing::open_scene();
  const PlacedObject target{"car", {210, 210, 2.5}, 2.5, true};
  s.add_object(target);
  EpisodeGenConfig cfg;
  Rng rng(5);
  const auto gt = fly_ground_truth(s, Pose(40, 40, 10), target, cfg, rng);
  REQUIRE(gt);
  CHECK(distance(gt->back().pose.position, target.position + Vec3{0, 0, cfg.final_height}) < 1.0);
  CHECK((*gt)[0].time == 0.0);
  for (std::size_t i = 1; i < gt->size(); ++i) {
    const double dt = (*gt)[i].time - (*gt)[i - 1].time;
    CHECK(dt > 0);
    if (i + 1 < gt->size()) CHECK(dt == Approx(cfg.record_dt));
    CHECK_FALSE(s.collides((*gt)[i].pose.position, cfg.limits.collision_radius));
  }
  double top = 0;
  for (const auto& p : gt->points()) top = std::max(top, p.pose.position.z);
  CHECK(top >= cfg.cruise_altitude_min - 0.5);
  CHECK(top <= cfg.cruise_altitude_max + 0.5);
}

TEST_CASE("generated episodes satisfy the collection rules") {
  SceneConfig sc;
  sc.size_x = sc.size_y = 500;
  auto scenes = generate_scenes(3, 21, sc);
  REQUIRE(scenes.size() == 3);
  CHECK(scenes[0].id() == "s000");
  CHECK(scenes[1].style() == "forest");
  CHECK(scenes[2].style() == "open");
  EpisodeGenConfig cfg;
  cfg.episodes_per_scene = 4;
  int easy = 0, hard = 0;
  for (Scene& s : scenes) {
    const auto eps = generate_episodes(s, 9, cfg);
    CHECK(eps.size() >= 2);
    for (const auto& e : eps) {
      CHECK_NOTHROW(e.validate());
      CHECK(e.scene_id == s.id());
      CHECK(std::hypot(e.start.position.x - e.target.position.x, e.start.position.y - e.target.position.y) >=
            cfg.min_start_distance);
      CHECK_FALSE(s.collides(e.start.position, cfg.limits.collision_radius));
      const double l = path_length(e.gt);
      CHECK(e.difficulty == (l < 250.0 ? Difficulty::Easy : Difficulty::Hard));
      (e.difficulty == Difficulty::Hard ? hard : easy) += 1;
    }
    CHECK(s.objects().size() >= eps.size());
  }
  CHECK(easy + hard >= 6);
}

TEST_CASE("episode generation is deterministic") {
  SceneConfig sc;
  sc.size_x = sc.size_y = 400;
  auto a = generate_scenes(2, 4, sc);
  auto b = generate_scenes(2, 4, sc);
  REQUIRE(a.size() == b.size());
  EpisodeGenConfig cfg;
  cfg.episodes_per_scene = 3;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_scene(a[i], b[i]));
    CHECK(generate_episodes(a[i], 8, cfg) == generate_episodes(b[i], 8, cfg));
  }
  CHECK_FALSE(same_scene(generate_scenes(2, 5, sc)[0], a[0]));
}

TEST_CASE("scene and manifest store round-trip") {
  testing::TempDir dir;
  SceneConfig sc;
  sc.size_x = sc.size_y = 400;
  auto scenes = generate_scenes(2, 3, sc);
  EpisodeGenConfig cfg;
  cfg.episodes_per_scene = 2;
  std::vector<Episode> all;
  for (Scene& s : scenes)
    for (auto& e : generate_episodes(s, 1, cfg)) all.push_back(e);
  save_scenes(dir.path() / "scenes", scenes);
  write_manifest(dir.path() / "episodes.jsonl", all);

  CHECK(read_manifest(dir.path() / "episodes.jsonl") == all);
  const auto loaded = load_scenes(dir.path() / "scenes");
  REQUIRE(loaded.size() == scenes.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) CHECK(same_scene(loaded[i], scenes[i]));

  const EpisodeStore store = load_store(dir.path() / "episodes.jsonl");
  CHECK(store.episodes == all);
  CHECK(store.scene_for(all.front()).id() == all.front().scene_id);
  Episode orphan = all.front();
  orphan.scene_id = "nope";
  CHECK_THROWS_AS(store.scene_for(orphan), Error);
  CHECK_THROWS_AS(load_store(dir.path() / "missing.jsonl"), Error);
}
