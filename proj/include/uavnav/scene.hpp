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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uavnav/geometry.hpp"

namespace uavnav {

// Axis-aligned rectangle in the ground plane.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double depth() const { return y1 - y0; }
  double area() const { return width() * depth(); }
  Vec3 center(double z = 0.0) const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1), z}; }
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  bool overlaps(const Rect& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
  Rect expanded(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
  bool operator==(const Rect&) const = default;
};

struct Aabb {
  Vec3 min;
  Vec3 max;
  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
  }
  bool operator==(const Aabb&) const = default;
};

// Semantic label written into semantic images. 0 means nothing was hit.
enum class Material : uint8_t { None = 0, Ground = 1, Building = 2, Tree = 3, Terrain = 4, Rock = 5 };

std::string_view material_name(Material m);
Material material_from_name(std::string_view name);

struct BoxShape {
  Vec3 min;
  Vec3 max;
  bool operator==(const BoxShape&) const = default;
};

// Vertical cylinder.
struct CylinderShape {
  double cx = 0.0, cy = 0.0, radius = 0.0, z_min = 0.0, z_max = 0.0;
  bool operator==(const CylinderShape&) const = default;
};

// Piecewise-constant terrain resting on the ground: nx * ny columns over
// `area`, heights row-major with y as the slow index.
struct HeightfieldShape {
  Rect area;
  int nx = 1;
  int ny = 1;
  std::vector<double> heights;

  double height_at(int ix, int iy) const { return heights[static_cast<std::size_t>(iy) * nx + ix]; }
  double cell_w() const { return area.width() / nx; }
  double cell_d() const { return area.depth() / ny; }
  bool operator==(const HeightfieldShape&) const = default;
};

using Shape = std::variant<BoxShape, CylinderShape, HeightfieldShape>;

struct Obstacle {
  Shape shape;
  Material material = Material::Building;
  bool operator==(const Obstacle&) const = default;
};

Rect footprint(const Shape& s);
double top_height(const Shape& s);
// First entry distance of the ray in [0, t_max), 0 if the origin is inside.
std::optional<double> intersect(const Shape& s, const Vec3& origin, const Vec3& dir, double t_max);
// Euclidean distance from p to the solid (0 inside).
double distance_to(const Shape& s, const Vec3& p);

struct FeasibleRegion {
  std::string name;
  Rect area;
  bool operator==(const FeasibleRegion&) const = default;
};

struct PlacedObject {
  std::string category;
  Vec3 position;  // centre of the bounding sphere
  double bounding_radius = 1.0;
  bool is_target = false;
  bool operator==(const PlacedObject&) const = default;
};

// Object catalogue: categories and their bounding radii.
struct ObjectKind {
  std::string_view category;
  double bounding_radius;
  uint8_t semantic_id;
};
const std::vector<ObjectKind>& object_catalogue();
const ObjectKind* find_object_kind(std::string_view category);

struct RayHit {
  double distance = 0.0;
  uint8_t semantic_id = 0;
};

inline constexpr double kDefaultMaxRange = 100.0;

class Scene {
 public:
  Scene() = default;
  Scene(std::string id, uint64_t seed, std::string style, Aabb bounds, Rect start_region,
        std::vector<Obstacle> obstacles, std::vector<FeasibleRegion> regions, std::vector<PlacedObject> objects = {});

  const std::string& id() const { return id_; }
  uint64_t seed() const { return seed_; }
  const std::string& style() const { return style_; }
  const Aabb& bounds() const { return bounds_; }
  const Rect& start_region() const { return start_region_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const std::vector<FeasibleRegion>& feasible_regions() const { return regions_; }
  const std::vector<PlacedObject>& objects() const { return objects_; }
  const FeasibleRegion* find_region(std::string_view name) const;

  void add_object(PlacedObject obj);

  // First hit against obstacles, the ground plane and (optionally) object
  // bounding spheres; nullopt when nothing lies within max_range.
  std::optional<RayHit> raycast(const Vec3& origin, const Vec3& dir, double max_range = kDefaultMaxRange,
                                bool include_objects = true) const;
  // Closed-surface test: touching counts as a collision.
  bool collides(const Vec3& p, double radius) const;
  // Distance to the nearest obstacle or ground surface.
  double clearance(const Vec3& p) const;

  bool operator==(const Scene& o) const;

 private:
  void build_index();
  template <class Fn>
  void for_cells_in(const Rect& r, Fn&& fn) const;

  std::string id_;
  uint64_t seed_ = 0;
  std::string style_;
  Aabb bounds_;
  Rect start_region_;
  std::vector<Obstacle> obstacles_;
  std::vector<FeasibleRegion> regions_;
  std::vector<PlacedObject> objects_;

  // Uniform xy grid over the bounds.
  double cell_ = 10.0;
  int gx_ = 0;
  int gy_ = 0;
  std::vector<std::vector<uint32_t>> cells_;
  std::vector<double> cell_top_;
};

enum class SceneStyle { Urban, Forest, Open };
std::string_view style_name(SceneStyle s);
SceneStyle style_from_name(std::string_view name);

struct SceneConfig {
  SceneStyle style = SceneStyle::Urban;
  double size_x = 400.0;
  double size_y = 400.0;
  double height = 120.0;
  double obstacle_density = 0.002;  // obstacles per square meter
  Rect start_region{20.0, 20.0, 60.0, 60.0};
  int n_regions = 8;
  double region_size = 20.0;
  double clearance = 10.0;  // obstacle-free margin around start and feasible regions
  double min_region_distance = 80.0;  // from the start region centre
};

Scene generate_scene(uint64_t seed, const SceneConfig& config, std::string id = {});

// Uniform rejection sampling inside the region; throws Infeasible after
// `max_attempts` colliding candidates.
PlacedObject place_object(const Scene& scene, std::string_view category, std::string_view region, uint64_t rng_seed,
                          int max_attempts = 200);

inline std::optional<RayHit> raycast(const Scene& s, const Vec3& origin, const Vec3& dir,
                                     double max_range = kDefaultMaxRange) {
  return s.raycast(origin, dir, max_range);
}
bool collision_check(const Scene& s, const Vec3& position, double radius);

}  // namespace uavnav
