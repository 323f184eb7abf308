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

#include "uavnav/generation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <limits>
#include <queue>
#include <set>

#include "uavnav/error.hpp"
#include "uavnav/serialization.hpp"

namespace uavnav {

std::vector<Scene> generate_scenes(int n_scenes, uint64_t seed, const SceneConfig& base) {
  require(n_scenes >= 1, "need at least one scene");
  static constexpr SceneStyle kStyles[] = {SceneStyle::Urban, SceneStyle::Forest, SceneStyle::Open};
  std::vector<Scene> out;
  for (int k = 0; k < n_scenes; ++k) {
    char id[16];
    std::snprintf(id, sizeof id, "s%03d", k);
    SceneConfig cfg = base;
    cfg.style = kStyles[k % 3];
    out.push_back(generate_scene(derive_seed(seed, id), cfg, id));
  }
  return out;
}

namespace {

struct Grid {
  double x0, y0, cell;
  int nx, ny;

  int index(int ix, int iy) const { return iy * nx + ix; }
  Vec3 center(int ix, int iy, double z) const { return {x0 + (ix + 0.5) * cell, y0 + (iy + 0.5) * cell, z}; }
  std::pair<int, int> cell_of(const Vec3& p) const {
    return {std::clamp(static_cast<int>(std::floor((p.x - x0) / cell)), 0, nx - 1),
            std::clamp(static_cast<int>(std::floor((p.y - y0) / cell)), 0, ny - 1)};
  }
};

}  // namespace

std::optional<std::vector<Vec3>> plan_path(const Scene& scene, const Vec3& start, const Vec3& goal, double altitude,
                                           double cell, double margin, double segment_margin) {
  require(cell > 0.0 && margin > 0.0 && segment_margin > 0.0, "plan_path: cell and margins must be positive");
  const Aabb& b = scene.bounds();
  Grid g{b.min.x, b.min.y, cell, std::max(1, static_cast<int>(std::ceil((b.max.x - b.min.x) / cell))),
         std::max(1, static_cast<int>(std::ceil((b.max.y - b.min.y) / cell)))};
  const Vec3 s{start.x, start.y, altitude};
  const Vec3 t{goal.x, goal.y, altitude};
  if (scene.collides(s, segment_margin) || scene.collides(t, segment_margin)) return std::nullopt;

  const std::size_t n = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
  std::vector<int8_t> blocked(n, -1);
  auto is_blocked = [&](int ix, int iy) {
    int8_t& v = blocked[static_cast<std::size_t>(g.index(ix, iy))];
    if (v < 0) v = scene.collides(g.center(ix, iy, altitude), margin) ? 1 : 0;
    return v == 1;
  };
  const auto [sx, sy] = g.cell_of(s);
  const auto [tx, ty] = g.cell_of(t);

  std::vector<double> cost(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  auto heuristic = [&](int ix, int iy) {
    const double dx = std::abs(ix - tx), dy = std::abs(iy - ty);
    return cell * (std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy));
  };
  const int start_idx = g.index(sx, sy);
  const int goal_idx = g.index(tx, ty);
  cost[static_cast<std::size_t>(start_idx)] = 0.0;
  open.emplace(heuristic(sx, sy), start_idx);
  bool found = false;
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    const int ix = idx % g.nx, iy = idx / g.nx;
    const double c = cost[static_cast<std::size_t>(idx)];
    if (f > c + heuristic(ix, iy) + 1e-9) continue;
    if (idx == goal_idx) {
      found = true;
      break;
    }
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
        const int j = g.index(jx, jy);
        if (j != goal_idx && is_blocked(jx, jy)) continue;
        if (dx != 0 && dy != 0 && (is_blocked(ix + dx, iy) || is_blocked(ix, iy + dy))) continue;
        const double nc = c + cell * ((dx != 0 && dy != 0) ? std::numbers::sqrt2 : 1.0);
        if (nc < cost[static_cast<std::size_t>(j)]) {
          cost[static_cast<std::size_t>(j)] = nc;
          parent[static_cast<std::size_t>(j)] = idx;
          open.emplace(nc + heuristic(jx, jy), j);
        }
      }
    }
  }
  if (!found) return std::nullopt;

  std::vector<Vec3> raw{t};
  for (int idx = parent[static_cast<std::size_t>(goal_idx)]; idx >= 0 && idx != start_idx;
       idx = parent[static_cast<std::size_t>(idx)])
    raw.push_back(g.center(idx % g.nx, idx / g.nx, altitude));
  raw.push_back(s);
  std::reverse(raw.begin(), raw.end());

  // Greedy forward shortcutting.
  std::vector<Vec3> path{raw.front()};
  std::size_t i = 0;
  while (i + 1 < raw.size()) {
    std::size_t j = i + 1;
    if (!segment_clear(scene, raw[i], raw[j], segment_margin)) return std::nullopt;
    while (j + 1 < raw.size() && segment_clear(scene, raw[i], raw[j + 1], segment_margin)) ++j;
    path.push_back(raw[j]);
    i = j;
  }
  return path;
}

std::optional<Trajectory> fly_ground_truth(const Scene& scene, const Pose& start, const PlacedObject& target,
                                           const EpisodeGenConfig& cfg, Rng& rng) {
  const double altitude = rng.uniform(cfg.cruise_altitude_min, cfg.cruise_altitude_max);
  const auto path = plan_path(scene, start.position, target.position, altitude, cfg.planning_cell,
                              cfg.planning_margin, cfg.segment_margin);
  if (!path) return std::nullopt;

  // Climb and descend along the first and last legs when those slopes are
  // clear, otherwise vertically above the start and the target.
  std::vector<Vec3> points = *path;
  const Vec3 final_point = target.position + Vec3{0.0, 0.0, cfg.final_height};
  if (points.size() > 2 && segment_clear(scene, start.position, points[1], cfg.segment_margin)) {
    points.front() = start.position;
  } else {
    if (!segment_clear(scene, start.position, points.front(), cfg.segment_margin)) return std::nullopt;
    points.insert(points.begin(), start.position);
  }
  if (points.size() > 2 && segment_clear(scene, points[points.size() - 2], final_point, cfg.segment_margin)) {
    points.back() = final_point;
  } else {
    if (!segment_clear(scene, points.back(), final_point, cfg.segment_margin)) return std::nullopt;
    points.push_back(final_point);
  }

  std::vector<Pose> waypoints;
  double yaw = start.yaw;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Vec3 d = points[i] - points[i - 1];
    if (d.horizontal_norm() > 1e-9) yaw = std::atan2(d.y, d.x);
    waypoints.emplace_back(points[i], 0.0, 0.0, yaw);
  }

  std::vector<UavState> states{hover_state(start)};
  for (const Pose& wp : waypoints) {
    const auto flight = fly_to_waypoint(states.back(), wp, cfg.limits, scene);
    if (flight.collision || !flight.reached) return std::nullopt;
    states.insert(states.end(), flight.states.begin() + 1, flight.states.end());
  }
  const auto k = static_cast<std::size_t>(std::max(1L, std::lround(cfg.record_dt / cfg.limits.dt)));
  Trajectory gt;
  for (std::size_t i = 0; i < states.size(); i += k) gt.append(states[i].time, states[i].pose);
  if ((states.size() - 1) % k != 0) gt.append(states.back().time, states.back().pose);
  return gt;
}

std::vector<Episode> generate_episodes(Scene& scene, uint64_t seed, const EpisodeGenConfig& cfg) {
  require(cfg.episodes_per_scene >= 0 && cfg.distractors_per_scene >= 0, "episode counts must be non-negative");
  require(cfg.cruise_altitude_min > 0.0 && cfg.cruise_altitude_max >= cfg.cruise_altitude_min,
          "invalid cruise altitude band");
  cfg.limits.validate();
  const auto& regions = scene.feasible_regions();
  require(!regions.empty(), "scene " + scene.id() + " has no feasible regions", ErrorCode::Infeasible);
  const auto& catalogue = object_catalogue();

  Rng rng(derive_seed(seed, scene.id()));
  std::vector<std::size_t> order(regions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  auto place = [&](std::size_t region) -> std::optional<PlacedObject> {
    const auto& kind = catalogue[rng.below(catalogue.size())];
    try {
      return place_object(scene, kind.category, regions[region].name, rng.next_u64());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      return std::nullopt;
    }
  };

  std::vector<PlacedObject> targets;
  for (int k = 0; k < cfg.episodes_per_scene; ++k) {
    auto obj = place(order[static_cast<std::size_t>(k) % order.size()]);
    if (!obj) continue;
    scene.add_object(*obj);
    targets.push_back(*obj);
  }
  for (int k = 0; k < cfg.distractors_per_scene; ++k)
    if (auto obj = place(rng.below(regions.size()))) scene.add_object(*obj);

  std::vector<Episode> episodes;
  const Rect& sr = scene.start_region();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    char id[64];
    std::snprintf(id, sizeof id, "%s-e%03zu", scene.id().c_str(), k);
    Rng erng(derive_seed(seed, id));
    PlacedObject target = targets[k];
    target.is_target = true;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
      const Pose start(Vec3{erng.uniform(sr.x0, sr.x1), erng.uniform(sr.y0, sr.y1),
                            erng.uniform(cfg.start_altitude_min, cfg.start_altitude_max)},
                       0.0, 0.0, erng.uniform(-std::numbers::pi, std::numbers::pi));
      if ((target.position - start.position).horizontal_norm() < cfg.min_start_distance) continue;
      if (scene.collides(start.position, cfg.limits.collision_radius + 1.0)) continue;
      auto gt = fly_ground_truth(scene, start, target, cfg, erng);
      if (!gt) continue;
      Episode e;
      e.id = id;
      e.scene_id = scene.id();
      e.start = start;
      e.description = generate_description(start, target, scene);
      e.gt = std::move(*gt);
      e.target = target;
      e.difficulty = classify_difficulty(path_length(e.gt));
      e.validate();
      episodes.push_back(std::move(e));
      break;
    }
  }
  return episodes;
}

const Scene& EpisodeStore::scene_for(const Episode& e) const {
  const auto it = scenes.find(e.scene_id);
  require(it != scenes.end(), "scene '" + e.scene_id + "' not loaded");
  return it->second;
}

void save_scenes(const std::filesystem::path& dir, const std::vector<Scene>& scenes) {
  std::filesystem::create_directories(dir);
  for (const auto& s : scenes) write_text_file(dir / (s.id() + ".json"), dump_canonical(scene_to_json(s)) + "\n");
}

std::vector<Scene> load_scenes(const std::filesystem::path& scenes_dir) {
  std::vector<std::filesystem::path> files;
  require(std::filesystem::is_directory(scenes_dir), "no scene directory at " + scenes_dir.string(), ErrorCode::Io);
  for (const auto& entry : std::filesystem::directory_iterator(scenes_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Scene> out;
  for (const auto& f : files) out.push_back(scene_from_json(read_json_file(f)));
  return out;
}

void write_manifest(const std::filesystem::path& path, const std::vector<Episode>& episodes) {
  std::string text;
  for (const auto& e : episodes) text += dump_canonical(json(e)) + "\n";
  write_text_file(path, text);
}

std::vector<Episode> read_manifest(const std::filesystem::path& path) {
  std::vector<Episode> out;
  for (const auto& j : read_jsonl_file(path)) {
    out.push_back(j.get<Episode>());
    out.back().validate();
  }
  return out;
}

EpisodeStore load_store(const std::filesystem::path& manifest) {
  EpisodeStore store;
  store.episodes = read_manifest(manifest);
  const auto scenes_dir = manifest.parent_path() / "scenes";
  for (const auto& e : store.episodes) {
    if (store.scenes.count(e.scene_id)) continue;
    store.scenes.emplace(e.scene_id, scene_from_json(read_json_file(scenes_dir / (e.scene_id + ".json"))));
  }
  return store;
}

}  // namespace uavnav
