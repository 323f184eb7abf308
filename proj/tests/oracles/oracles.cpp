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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace uavnav::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double v) { return v * v; }

bool inside_box(const Vec3& mn, const Vec3& mx, const Vec3& p) {
  return p.x >= mn.x && p.x <= mx.x && p.y >= mn.y && p.y <= mx.y && p.z >= mn.z && p.z <= mx.z;
}

// Each of the six faces as a plane; keep hits whose point lies on the face.
double box_hit(const Vec3& mn, const Vec3& mx, const Vec3& o, const Vec3& d) {
  if (inside_box(mn, mx, o)) return 0.0;
  double best = kInf;
  const double lo[3] = {mn.x, mn.y, mn.z};
  const double hi[3] = {mx.x, mx.y, mx.z};
  const double oo[3] = {o.x, o.y, o.z};
  const double dd[3] = {d.x, d.y, d.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (dd[axis] == 0.0) continue;
    for (double plane : {lo[axis], hi[axis]}) {
      const double t = (plane - oo[axis]) / dd[axis];
      if (t < 0.0 || t >= best) continue;
      bool on_face = true;
      for (int k = 0; k < 3; ++k) {
        if (k == axis) continue;
        const double c = oo[k] + dd[k] * t;
        const double eps = 1e-9 * std::max(1.0, std::abs(c));
        if (c < lo[k] - eps || c > hi[k] + eps) on_face = false;
      }
      if (on_face) best = t;
    }
  }
  return best;
}

double cylinder_hit(const CylinderShape& c, const Vec3& o, const Vec3& d) {
  const auto in_disk = [&](double x, double y) { return sq(x - c.cx) + sq(y - c.cy) <= sq(c.radius) * (1 + 1e-12); };
  if (in_disk(o.x, o.y) && o.z >= c.z_min && o.z <= c.z_max) return 0.0;
  double best = kInf;
  // Lateral surface.
  const double a = sq(d.x) + sq(d.y);
  if (a > 0.0) {
    const double b = 2.0 * ((o.x - c.cx) * d.x + (o.y - c.cy) * d.y);
    const double cc = sq(o.x - c.cx) + sq(o.y - c.cy) - sq(c.radius);
    const double disc = b * b - 4 * a * cc;
    if (disc >= 0.0) {
      for (double t : {(-b - std::sqrt(disc)) / (2 * a), (-b + std::sqrt(disc)) / (2 * a)}) {
        const double z = o.z + d.z * t;
        if (t >= 0.0 && z >= c.z_min - 1e-9 && z <= c.z_max + 1e-9) best = std::min(best, t);
      }
    }
  }
  // Caps.
  if (d.z != 0.0) {
    for (double plane : {c.z_min, c.z_max}) {
      const double t = (plane - o.z) / d.z;
      if (t >= 0.0 && in_disk(o.x + d.x * t, o.y + d.y * t)) best = std::min(best, t);
    }
  }
  return best;
}

double heightfield_hit(const HeightfieldShape& h, const Vec3& o, const Vec3& d) {
  double best = kInf;
  for (int iy = 0; iy < h.ny; ++iy)
    for (int ix = 0; ix < h.nx; ++ix) {
      const Vec3 mn{h.area.x0 + ix * h.cell_w(), h.area.y0 + iy * h.cell_d(), 0.0};
      const Vec3 mx{h.area.x0 + (ix + 1) * h.cell_w(), h.area.y0 + (iy + 1) * h.cell_d(), h.height_at(ix, iy)};
      best = std::min(best, box_hit(mn, mx, o, d));
    }
  return best;
}

double sphere_hit(const Vec3& c, double r, const Vec3& o, const Vec3& d) {
  const Vec3 oc = o - c;
  if (oc.dot(oc) <= r * r) return 0.0;
  const double b = 2.0 * oc.dot(d);
  const double cc = oc.dot(oc) - r * r;
  const double disc = b * b - 4.0 * d.dot(d) * cc;
  if (disc < 0.0) return kInf;
  const double t = (-b - std::sqrt(disc)) / (2.0 * d.dot(d));
  return t >= 0.0 ? t : kInf;
}

}  // namespace

double euclid(const Vec3& a, const Vec3& b) { return std::sqrt(sq(a.x - b.x) + sq(a.y - b.y) + sq(a.z - b.z)); }

NearestPoint nearest(const Trajectory& traj, const Vec3& p) {
  NearestPoint best{0, kInf};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double dist = euclid(traj[i].pose.position, p);
    if (dist < best.distance) best = {i, dist};
  }
  return best;
}

double polyline_length(const Trajectory& traj) {
  double total = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) total += euclid(traj[i - 1].pose.position, traj[i].pose.position);
  return total;
}

std::optional<double> first_hit(const Scene& scene, const Vec3& o, const Vec3& d, double max_range,
                                bool include_objects) {
  double best = kInf;
  if (o.z <= 0.0) best = 0.0;
  if (d.z < 0.0) best = std::min(best, o.z / -d.z);
  for (const auto& ob : scene.obstacles()) {
    double t = kInf;
    if (const auto* b = std::get_if<BoxShape>(&ob.shape)) t = box_hit(b->min, b->max, o, d);
    if (const auto* c = std::get_if<CylinderShape>(&ob.shape)) t = cylinder_hit(*c, o, d);
    if (const auto* h = std::get_if<HeightfieldShape>(&ob.shape)) t = heightfield_hit(*h, o, d);
    best = std::min(best, t);
  }
  if (include_objects)
    for (const auto& obj : scene.objects()) best = std::min(best, sphere_hit(obj.position, obj.bounding_radius, o, d));
  if (best < max_range) return best;
  return std::nullopt;
}

Stats episode(const EpisodeResult& result, const Episode& ep, double radius) {
  Stats s;
  s.success = result.outcome == Outcome::Success ? 1.0 : 0.0;
  s.ne = result.final_distance;
  for (std::size_t i = 0; i < result.executed.size(); ++i)
    if (euclid(result.executed[i].pose.position, ep.target.position) <= radius) s.oracle_success = 1.0;
  const double l = polyline_length(ep.gt);
  const double p = polyline_length(result.executed);
  // SPL = S * l / max(p, l); an empty reference path counts as optimal.
  if (s.success == 1.0) s.spl = std::max(p, l) > 0 ? l / std::max(p, l) : 1.0;
  return s;
}

Report report(std::span<const EpisodeResult> results, std::span<const Episode> episodes, double radius) {
  std::map<std::string, const Episode*> by_id;
  for (const auto& e : episodes) by_id[e.id] = &e;
  Report r;
  auto add = [](Row& row, const Stats& s) {
    row.n += 1;
    row.sr += s.success;
    row.osr += s.oracle_success;
    row.spl += s.spl;
    row.ne += s.ne;
  };
  for (const auto& res : results) {
    const Episode& e = *by_id.at(res.episode_id);
    const Stats s = episode(res, e, radius);
    add(r.full, s);
    add(e.difficulty == Difficulty::Easy ? r.easy : r.hard, s);
  }
  for (Row* row : {&r.full, &r.easy, &r.hard}) {
    if (row->n == 0) continue;
    row->sr = 100.0 * row->sr / row->n;
    row->osr = 100.0 * row->osr / row->n;
    row->spl = 100.0 * row->spl / row->n;
    row->ne /= row->n;
  }
  return r;
}

}  // namespace uavnav::oracle
