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

#include "uavnav/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "uavnav/error.hpp"
#include "uavnav/rng.hpp"

namespace uavnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo;
  double hi;
};

// Parametric interval of the ray inside the slab [lo, hi] along one axis.
std::optional<Interval> slab(double o, double d, double lo, double hi) {
  if (d == 0.0) {
    if (o < lo || o > hi) return std::nullopt;
    return Interval{-kInf, kInf};
  }
  double t0 = (lo - o) / d;
  double t1 = (hi - o) / d;
  if (t0 > t1) std::swap(t0, t1);
  return Interval{t0, t1};
}

std::optional<double> intersect_box(const Vec3& mn, const Vec3& mx, const Vec3& o, const Vec3& d, double t_max) {
  auto ix = slab(o.x, d.x, mn.x, mx.x);
  if (!ix) return std::nullopt;
  auto iy = slab(o.y, d.y, mn.y, mx.y);
  if (!iy) return std::nullopt;
  auto iz = slab(o.z, d.z, mn.z, mx.z);
  if (!iz) return std::nullopt;
  const double enter = std::max({ix->lo, iy->lo, iz->lo});
  const double exit = std::min({ix->hi, iy->hi, iz->hi});
  if (exit < std::max(enter, 0.0)) return std::nullopt;
  const double t = std::max(enter, 0.0);
  if (t >= t_max) return std::nullopt;
  return t;
}

std::optional<double> intersect_cylinder(const CylinderShape& c, const Vec3& o, const Vec3& d, double t_max) {
  const double ox = o.x - c.cx, oy = o.y - c.cy;
  const double a = d.x * d.x + d.y * d.y;
  Interval circle{-kInf, kInf};
  if (a < 1e-18) {
    if (ox * ox + oy * oy > c.radius * c.radius) return std::nullopt;
  } else {
    const double b = ox * d.x + oy * d.y;
    const double cc = ox * ox + oy * oy - c.radius * c.radius;
    const double disc = b * b - a * cc;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    circle = {(-b - s) / a, (-b + s) / a};
  }
  auto iz = slab(o.z, d.z, c.z_min, c.z_max);
  if (!iz) return std::nullopt;
  const double enter = std::max(circle.lo, iz->lo);
  const double exit = std::min(circle.hi, iz->hi);
  if (exit < std::max(enter, 0.0)) return std::nullopt;
  const double t = std::max(enter, 0.0);
  if (t >= t_max) return std::nullopt;
  return t;
}

std::optional<double> intersect_heightfield(const HeightfieldShape& h, const Vec3& o, const Vec3& d, double t_max) {
  const double top = *std::max_element(h.heights.begin(), h.heights.end());
  if (!intersect_box({h.area.x0, h.area.y0, 0.0}, {h.area.x1, h.area.y1, top}, o, d, t_max)) return std::nullopt;
  std::optional<double> best;
  const double w = h.cell_w(), dp = h.cell_d();
  for (int iy = 0; iy < h.ny; ++iy) {
    for (int ix = 0; ix < h.nx; ++ix) {
      const Vec3 mn{h.area.x0 + ix * w, h.area.y0 + iy * dp, 0.0};
      const Vec3 mx{h.area.x0 + (ix + 1) * w, h.area.y0 + (iy + 1) * dp, h.height_at(ix, iy)};
      if (auto t = intersect_box(mn, mx, o, d, best ? *best : t_max)) best = t;
    }
  }
  return best;
}

double distance_to_box(const Vec3& mn, const Vec3& mx, const Vec3& p) {
  const double dx = std::max({mn.x - p.x, 0.0, p.x - mx.x});
  const double dy = std::max({mn.y - p.y, 0.0, p.y - mx.y});
  const double dz = std::max({mn.z - p.z, 0.0, p.z - mx.z});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::optional<double> intersect_sphere(const Vec3& c, double r, const Vec3& o, const Vec3& d, double t_max) {
  const Vec3 oc = o - c;
  const double b = oc.dot(d);
  const double cc = oc.dot(oc) - r * r;
  if (cc <= 0.0) return 0.0;
  const double disc = b * b - cc;
  if (disc < 0.0) return std::nullopt;
  const double t = -b - std::sqrt(disc);
  if (t < 0.0 || t >= t_max) return std::nullopt;
  return t;
}

// Per-thread mailbox so an obstacle spanning several grid cells is tested
// once per ray.
struct Mailbox {
  std::vector<uint32_t> stamp;
  uint32_t ray = 0;

  uint32_t next(std::size_t n) {
    if (stamp.size() < n) stamp.resize(n, 0);
    if (++ray == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      ray = 1;
    }
    return ray;
  }
};

thread_local Mailbox tl_mailbox;

}  // namespace

std::string_view material_name(Material m) {
  switch (m) {
    case Material::None: return "none";
    case Material::Ground: return "ground";
    case Material::Building: return "building";
    case Material::Tree: return "tree";
    case Material::Terrain: return "terrain";
    case Material::Rock: return "rock";
  }
  return "none";
}

Material material_from_name(std::string_view name) {
  for (auto m : {Material::None, Material::Ground, Material::Building, Material::Tree, Material::Terrain, Material::Rock})
    if (material_name(m) == name) return m;
  throw Error(ErrorCode::Parse, "unknown material '" + std::string(name) + "'");
}

Rect footprint(const Shape& s) {
  return std::visit(
      [](const auto& sh) -> Rect {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          return {sh.min.x, sh.min.y, sh.max.x, sh.max.y};
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          return {sh.cx - sh.radius, sh.cy - sh.radius, sh.cx + sh.radius, sh.cy + sh.radius};
        } else {
          return sh.area;
        }
      },
      s);
}

double top_height(const Shape& s) {
  return std::visit(
      [](const auto& sh) -> double {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          return sh.max.z;
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          return sh.z_max;
        } else {
          return *std::max_element(sh.heights.begin(), sh.heights.end());
        }
      },
      s);
}

std::optional<double> intersect(const Shape& s, const Vec3& origin, const Vec3& dir, double t_max) {
  return std::visit(
      [&](const auto& sh) -> std::optional<double> {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          return intersect_box(sh.min, sh.max, origin, dir, t_max);
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          return intersect_cylinder(sh, origin, dir, t_max);
        } else {
          return intersect_heightfield(sh, origin, dir, t_max);
        }
      },
      s);
}

double distance_to(const Shape& s, const Vec3& p) {
  return std::visit(
      [&](const auto& sh) -> double {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          return distance_to_box(sh.min, sh.max, p);
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          const double dxy = std::max(0.0, std::hypot(p.x - sh.cx, p.y - sh.cy) - sh.radius);
          const double dz = std::max({sh.z_min - p.z, 0.0, p.z - sh.z_max});
          return std::hypot(dxy, dz);
        } else {
          double best = kInf;
          const double w = sh.cell_w(), dp = sh.cell_d();
          for (int iy = 0; iy < sh.ny; ++iy)
            for (int ix = 0; ix < sh.nx; ++ix)
              best = std::min(best, distance_to_box({sh.area.x0 + ix * w, sh.area.y0 + iy * dp, 0.0},
                                                    {sh.area.x0 + (ix + 1) * w, sh.area.y0 + (iy + 1) * dp,
                                                     sh.height_at(ix, iy)},
                                                    p));
          return best;
        }
      },
      s);
}

const std::vector<ObjectKind>& object_catalogue() {
  static const std::vector<ObjectKind> kinds = {
      {"car", 2.5, 10}, {"truck", 4.0, 11}, {"human", 1.0, 12}, {"animal", 1.2, 13},
      {"sign", 1.5, 14}, {"bicycle", 1.2, 15}, {"tent", 2.0, 16},
  };
  return kinds;
}

const ObjectKind* find_object_kind(std::string_view category) {
  for (const auto& k : object_catalogue())
    if (k.category == category) return &k;
  return nullptr;
}

Scene::Scene(std::string id, uint64_t seed, std::string style, Aabb bounds, Rect start_region,
             std::vector<Obstacle> obstacles, std::vector<FeasibleRegion> regions, std::vector<PlacedObject> objects)
    : id_(std::move(id)),
      seed_(seed),
      style_(std::move(style)),
      bounds_(bounds),
      start_region_(start_region),
      obstacles_(std::move(obstacles)),
      regions_(std::move(regions)),
      objects_(std::move(objects)) {
  require(bounds_.max.x > bounds_.min.x && bounds_.max.y > bounds_.min.y && bounds_.max.z > bounds_.min.z,
          "scene bounds must be non-degenerate");
  for (std::size_t i = 0; i < regions_.size(); ++i)
    for (std::size_t j = i + 1; j < regions_.size(); ++j)
      require(!regions_[i].area.overlaps(regions_[j].area), "feasible regions must not overlap");
  build_index();
}

const FeasibleRegion* Scene::find_region(std::string_view name) const {
  for (const auto& r : regions_)
    if (r.name == name) return &r;
  return nullptr;
}

void Scene::add_object(PlacedObject obj) {
  require(bounds_.contains(obj.position), "object outside scene bounds");
  objects_.push_back(std::move(obj));
}

bool Scene::operator==(const Scene& o) const {
  return id_ == o.id_ && seed_ == o.seed_ && style_ == o.style_ && bounds_ == o.bounds_ &&
         start_region_ == o.start_region_ && obstacles_ == o.obstacles_ && regions_ == o.regions_ &&
         objects_ == o.objects_;
}

void Scene::build_index() {
  gx_ = std::max(1, static_cast<int>(std::ceil((bounds_.max.x - bounds_.min.x) / cell_)));
  gy_ = std::max(1, static_cast<int>(std::ceil((bounds_.max.y - bounds_.min.y) / cell_)));
  cells_.assign(static_cast<std::size_t>(gx_) * gy_, {});
  cell_top_.assign(cells_.size(), -kInf);
  for (uint32_t i = 0; i < obstacles_.size(); ++i) {
    const double top = top_height(obstacles_[i].shape);
    for_cells_in(footprint(obstacles_[i].shape), [&](std::size_t c) {
      cells_[c].push_back(i);
      cell_top_[c] = std::max(cell_top_[c], top);
    });
  }
}

template <class Fn>
void Scene::for_cells_in(const Rect& r, Fn&& fn) const {
  const int x0 = std::clamp(static_cast<int>(std::floor((r.x0 - bounds_.min.x) / cell_)), 0, gx_ - 1);
  const int x1 = std::clamp(static_cast<int>(std::floor((r.x1 - bounds_.min.x) / cell_)), 0, gx_ - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor((r.y0 - bounds_.min.y) / cell_)), 0, gy_ - 1);
  const int y1 = std::clamp(static_cast<int>(std::floor((r.y1 - bounds_.min.y) / cell_)), 0, gy_ - 1);
  for (int iy = y0; iy <= y1; ++iy)
    for (int ix = x0; ix <= x1; ++ix) fn(static_cast<std::size_t>(iy) * gx_ + ix);
}

std::optional<RayHit> Scene::raycast(const Vec3& o, const Vec3& d, double max_range, bool include_objects) const {
  if (o.z <= 0.0) return RayHit{0.0, static_cast<uint8_t>(Material::Ground)};
  double best = max_range;
  uint8_t label = 0;
  if (d.z < 0.0) {
    const double tg = -o.z / d.z;
    if (tg < best) {
      best = tg;
      label = static_cast<uint8_t>(Material::Ground);
    }
  }
  if (include_objects) {
    for (const auto& obj : objects_) {
      if (auto t = intersect_sphere(obj.position, obj.bounding_radius, o, d, best)) {
        best = *t;
        const auto* kind = find_object_kind(obj.category);
        label = kind ? kind->semantic_id : 255;
      }
    }
  }

  if (!obstacles_.empty()) {
    const double bx0 = bounds_.min.x, by0 = bounds_.min.y;
    auto sx = slab(o.x, d.x, bx0, bx0 + gx_ * cell_);
    auto sy = slab(o.y, d.y, by0, by0 + gy_ * cell_);
    auto sz = slab(o.z, d.z, -kInf, bounds_.max.z);
    if (sx && sy && sz) {
      double t_enter = std::max({0.0, sx->lo, sy->lo, sz->lo});
      const double t_end = std::min({best, sx->hi, sy->hi, sz->hi});
      if (t_enter < t_end) {
        auto& mb = tl_mailbox;
        const uint32_t ray_id = mb.next(obstacles_.size());
        const Vec3 p = o + d * t_enter;
        int ix = std::clamp(static_cast<int>(std::floor((p.x - bx0) / cell_)), 0, gx_ - 1);
        int iy = std::clamp(static_cast<int>(std::floor((p.y - by0) / cell_)), 0, gy_ - 1);
        const int step_x = d.x > 0 ? 1 : -1;
        const int step_y = d.y > 0 ? 1 : -1;
        const double dtx = d.x != 0.0 ? cell_ / std::abs(d.x) : kInf;
        const double dty = d.y != 0.0 ? cell_ / std::abs(d.y) : kInf;
        double tmx = d.x != 0.0 ? ((bx0 + (ix + (d.x > 0 ? 1 : 0)) * cell_) - o.x) / d.x : kInf;
        double tmy = d.y != 0.0 ? ((by0 + (iy + (d.y > 0 ? 1 : 0)) * cell_) - o.y) / d.y : kInf;
        while (true) {
          const double t_exit = std::min({tmx, tmy, t_end});
          const std::size_t c = static_cast<std::size_t>(iy) * gx_ + ix;
          const double z_low = std::min(o.z + d.z * t_enter, o.z + d.z * t_exit);
          if (!cells_[c].empty() && z_low <= cell_top_[c]) {
            for (uint32_t id : cells_[c]) {
              if (mb.stamp[id] == ray_id) continue;
              mb.stamp[id] = ray_id;
              if (auto t = intersect(obstacles_[id].shape, o, d, best)) {
                best = *t;
                label = static_cast<uint8_t>(obstacles_[id].material);
              }
            }
          }
          if (best <= t_exit || t_exit >= t_end) break;
          if (tmx < tmy) {
            ix += step_x;
            t_enter = tmx;
            tmx += dtx;
          } else {
            iy += step_y;
            t_enter = tmy;
            tmy += dty;
          }
          if (ix < 0 || iy < 0 || ix >= gx_ || iy >= gy_) break;
        }
      }
    }
  }
  if (label == 0) return std::nullopt;
  return RayHit{best, label};
}

bool Scene::collides(const Vec3& p, double radius) const {
  if (p.z <= radius) return true;
  bool hit = false;
  for_cells_in(Rect{p.x - radius, p.y - radius, p.x + radius, p.y + radius}, [&](std::size_t c) {
    if (hit || p.z - radius > cell_top_[c]) return;
    for (uint32_t id : cells_[c]) {
      if (distance_to(obstacles_[id].shape, p) <= radius) {
        hit = true;
        return;
      }
    }
  });
  return hit;
}

double Scene::clearance(const Vec3& p) const {
  double best = std::max(p.z, 0.0);
  for (const auto& ob : obstacles_) best = std::min(best, distance_to(ob.shape, p));
  return best;
}

bool collision_check(const Scene& s, const Vec3& position, double radius) {
  require(radius > 0.0, "collision_check: radius must be positive");
  return s.collides(position, radius);
}

std::string_view style_name(SceneStyle s) {
  switch (s) {
    case SceneStyle::Urban: return "urban";
    case SceneStyle::Forest: return "forest";
    case SceneStyle::Open: return "open";
  }
  return "urban";
}

SceneStyle style_from_name(std::string_view name) {
  for (auto s : {SceneStyle::Urban, SceneStyle::Forest, SceneStyle::Open})
    if (style_name(s) == name) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown scene style '" + std::string(name) + "'");
}

namespace {

Obstacle sample_tree(Rng& rng, double x, double y, double r_lo, double r_hi, double h_lo, double h_hi) {
  return {CylinderShape{x, y, rng.uniform(r_lo, r_hi), 0.0, rng.uniform(h_lo, h_hi)}, Material::Tree};
}

Obstacle sample_box(Rng& rng, double x, double y, double s_lo, double s_hi, double h_lo, double h_hi, Material m) {
  const double w = rng.uniform(s_lo, s_hi), dp = rng.uniform(s_lo, s_hi);
  return {BoxShape{{x - 0.5 * w, y - 0.5 * dp, 0.0}, {x + 0.5 * w, y + 0.5 * dp, rng.uniform(h_lo, h_hi)}}, m};
}

Obstacle sample_terrain(Rng& rng, double x, double y) {
  HeightfieldShape h;
  const double w = rng.uniform(15.0, 35.0), dp = rng.uniform(15.0, 35.0);
  h.area = {x - 0.5 * w, y - 0.5 * dp, x + 0.5 * w, y + 0.5 * dp};
  h.nx = 6;
  h.ny = 6;
  h.heights.resize(36);
  for (auto& v : h.heights) v = rng.uniform(0.5, 6.0);
  return {std::move(h), Material::Terrain};
}

Obstacle sample_obstacle(Rng& rng, SceneStyle style, double x, double y) {
  const double u = rng.uniform();
  switch (style) {
    case SceneStyle::Urban:
      if (u < 0.75) return sample_box(rng, x, y, 8.0, 25.0, 10.0, 60.0, Material::Building);
      return sample_tree(rng, x, y, 0.5, 2.0, 6.0, 15.0);
    case SceneStyle::Forest:
      if (u < 0.8) return sample_tree(rng, x, y, 0.5, 2.5, 8.0, 25.0);
      return sample_terrain(rng, x, y);
    case SceneStyle::Open:
      if (u < 0.4) return sample_box(rng, x, y, 2.0, 6.0, 1.0, 4.0, Material::Rock);
      if (u < 0.7) return sample_tree(rng, x, y, 0.5, 2.0, 6.0, 15.0);
      return sample_terrain(rng, x, y);
  }
  return sample_tree(rng, x, y, 0.5, 2.0, 6.0, 15.0);
}

}  // namespace

Scene generate_scene(uint64_t seed, const SceneConfig& cfg, std::string id) {
  require(cfg.size_x > 0 && cfg.size_y > 0 && cfg.height > 0, "scene size must be positive");
  require(cfg.obstacle_density >= 0.0, "obstacle density must be non-negative");
  if (cfg.n_regions <= 0 || cfg.region_size <= 0.0)
    throw Error(ErrorCode::Infeasible, "scene config has zero feasible area");
  if (id.empty()) id = "scene_" + std::to_string(seed);

  Rng rng(seed);
  const Vec3 start_c = cfg.start_region.center();
  std::vector<FeasibleRegion> regions;
  std::vector<Rect> reserved{cfg.start_region.expanded(cfg.clearance)};
  const double margin = cfg.clearance;
  for (int k = 0; k < cfg.n_regions; ++k) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double x0 = rng.uniform(margin, cfg.size_x - cfg.region_size - margin);
      const double y0 = rng.uniform(margin, cfg.size_y - cfg.region_size - margin);
      const Rect r{x0, y0, x0 + cfg.region_size, y0 + cfg.region_size};
      if (distance(r.center(), start_c) < cfg.min_region_distance) continue;
      const Rect grown = r.expanded(cfg.clearance);
      if (std::any_of(reserved.begin(), reserved.end(), [&](const Rect& o) { return grown.overlaps(o); })) continue;
      regions.push_back({"R" + std::to_string(k), r});
      reserved.push_back(grown);
      break;
    }
  }
  if (regions.empty()) throw Error(ErrorCode::Infeasible, "no feasible region fits the scene config");

  const auto n = static_cast<long long>(std::llround(cfg.obstacle_density * cfg.size_x * cfg.size_y));
  std::vector<Obstacle> obstacles;
  obstacles.reserve(static_cast<std::size_t>(n));
  const Rect inside{0.0, 0.0, cfg.size_x, cfg.size_y};
  for (long long i = 0; i < n; ++i) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      const double x = rng.uniform(0.0, cfg.size_x), y = rng.uniform(0.0, cfg.size_y);
      Obstacle ob = sample_obstacle(rng, cfg.style, x, y);
      const Rect fp = footprint(ob.shape);
      if (fp.x0 < inside.x0 || fp.y0 < inside.y0 || fp.x1 > inside.x1 || fp.y1 > inside.y1) continue;
      if (top_height(ob.shape) > cfg.height) continue;
      if (std::any_of(reserved.begin(), reserved.end(), [&](const Rect& o) { return fp.overlaps(o); })) continue;
      obstacles.push_back(std::move(ob));
      break;
    }
  }
  return Scene(std::move(id), seed, std::string(style_name(cfg.style)),
               Aabb{{0.0, 0.0, 0.0}, {cfg.size_x, cfg.size_y, cfg.height}}, cfg.start_region, std::move(obstacles),
               std::move(regions));
}

PlacedObject place_object(const Scene& scene, std::string_view category, std::string_view region, uint64_t rng_seed,
                          int max_attempts) {
  const ObjectKind* kind = find_object_kind(category);
  require(kind != nullptr, "unknown object category '" + std::string(category) + "'");
  const FeasibleRegion* reg = scene.find_region(region);
  require(reg != nullptr, "unknown feasible region '" + std::string(region) + "'");
  const double r = kind->bounding_radius;
  const Rect area = reg->area;
  require(area.width() > 2 * r && area.depth() > 2 * r, "region too small for object");
  Rng rng(rng_seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const Vec3 pos{rng.uniform(area.x0 + r, area.x1 - r), rng.uniform(area.y0 + r, area.y1 - r), r};
    bool blocked = false;
    for (const auto& ob : scene.obstacles()) {
      if (distance_to(ob.shape, pos) <= r) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return PlacedObject{std::string(category), pos, r, false};
  }
  throw Error(ErrorCode::Infeasible, "no collision-free placement in region '" + std::string(region) + "'");
}

}  // namespace uavnav
