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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "uavnav/episode.hpp"
#include "uavnav/scene.hpp"

namespace uavnav::testing {

inline Aabb default_bounds(double size = 400.0, double height = 120.0) {
  return {{0.0, 0.0, 0.0}, {size, size, height}};
}

// Flat ground only.
inline Scene open_scene(double size = 400.0) {
  return Scene("open", 0, "open", default_bounds(size), {20, 20, 60, 60}, {},
               {{"r0", {200, 200, 220, 220}}, {"r1", {300, 100, 320, 120}}});
}

inline Obstacle box(Vec3 mn, Vec3 mx, Material m = Material::Building) { return {BoxShape{mn, mx}, m}; }

// A wall across +x: its near face sits at x = face_x.
inline Scene wall_scene(double face_x, double thickness = 4.0, double height = 100.0) {
  return Scene("wall", 0, "urban", default_bounds(), {20, 20, 60, 60},
               {box({face_x, 0.0, 0.0}, {face_x + thickness, 400.0, height})}, {{"r0", {300, 300, 320, 320}}});
}

// Straight east-west corridor 10 m wide between two tall walls, closed at the
// far end.
inline Scene corridor_scene() {
  std::vector<Obstacle> obs{
      box({0.0, 95.0, 0.0}, {300.0, 100.0, 110.0}),
      box({0.0, 110.0, 0.0}, {300.0, 115.0, 110.0}),
      box({300.0, 90.0, 0.0}, {305.0, 120.0, 110.0}),
  };
  return Scene("corridor", 0, "urban", default_bounds(), {5, 100, 15, 110}, std::move(obs),
               {{"r0", {250, 100, 260, 110}}});
}

// Trajectory sampled every `spacing` meters from a to b, one second apart.
inline Trajectory straight_trajectory(const Vec3& a, const Vec3& b, double spacing) {
  Trajectory t;
  const double len = distance(a, b);
  const int n = static_cast<int>(std::ceil(len / spacing));
  for (int i = 0; i <= n; ++i) {
    const double f = n == 0 ? 0.0 : std::min(1.0, i * spacing / len);
    t.append(i, Pose(a + (b - a) * f, 0, 0, 0));
  }
  return t;
}

// Episode over `scene` with a straight GT from start to 3 m above the target.
inline Episode straight_episode(const std::string& id, const Scene& scene, const Vec3& start, const Vec3& target,
                                const std::string& category = "car") {
  Episode e;
  e.id = id;
  e.scene_id = scene.id();
  const double yaw = std::atan2(target.y - start.y, target.x - start.x);
  e.start = Pose(start, 0, 0, yaw);
  e.target = PlacedObject{category, target, 2.5, true};
  e.gt = straight_trajectory(start, target + Vec3{0, 0, 3}, 1.0);
  e.difficulty = classify_difficulty(path_length(e.gt));
  e.description = {"The target is ahead.", "The target is a parked car.",
                   "It stands in an open area with nothing else nearby."};
  return e;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("uavnav-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace uavnav::testing
