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

#include "uavnav/collection.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uavnav/error.hpp"
#include "uavnav/serialization.hpp"

namespace uavnav {

std::string_view record_source_name(RecordSource s) {
  switch (s) {
    case RecordSource::Human:
      return "human";
    case RecordSource::Teacher:
      return "teacher";
    case RecordSource::Dagger:
      return "dagger";
  }
  return "human";
}

RecordSource record_source_from_name(std::string_view name) {
  for (RecordSource s : {RecordSource::Human, RecordSource::Teacher, RecordSource::Dagger})
    if (record_source_name(s) == name) return s;
  throw Error(ErrorCode::Parse, "unknown record source '" + std::string(name) + "'");
}

Trajectory TrajectoryRecord::trajectory() const {
  Trajectory t;
  for (const auto& s : states) t.append(s.time, s.pose);
  return t;
}

TrajectoryRecord record_flight(std::span<const UavState> stream, double record_dt, double control_dt) {
  require(control_dt > 0.0 && record_dt > 0.0, "record_flight: intervals must be positive");
  const double ratio = record_dt / control_dt;
  const long k = std::lround(ratio);
  require(k >= 1 && std::abs(ratio - static_cast<double>(k)) < 1e-9,
          "record_flight: record_dt must be a multiple of the control dt");
  TrajectoryRecord rec;
  rec.record_dt = record_dt;
  if (stream.empty()) return rec;
  const double t0 = stream.front().time;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const double expected = t0 + static_cast<double>(i) * control_dt;
    require(std::abs(stream[i].time - expected) <= 1e-6,
            "record_flight: state " + std::to_string(i) + " is off the control clock");
  }
  for (std::size_t i = 0; i < stream.size(); i += static_cast<std::size_t>(k)) rec.states.push_back(stream[i]);
  return rec;
}

TrajectoryRecord backfill_sensors(const TrajectoryRecord& record, const Scene& scene, const CameraConfig& cam) {
  TrajectoryRecord out = record;
  out.frames.clear();
  out.frames.reserve(record.states.size());
  for (const auto& s : record.states) {
    FrameSet fs = render_all(scene, s.pose, cam, /*with_semantics=*/true);
    out.frames.push_back(SensorFrame{s.time, std::move(fs.depth), std::move(fs.semantic)});
  }
  return out;
}

std::string_view dagger_event_name(DaggerEventKind k) {
  switch (k) {
    case DaggerEventKind::ModelAction:
      return "model_action";
    case DaggerEventKind::CollisionBacktrack:
      return "collision_backtrack";
    case DaggerEventKind::TeacherAction:
      return "teacher_action";
    case DaggerEventKind::RecoveryBacktrack:
      return "recovery_backtrack";
  }
  return "model_action";
}

DaggerResult collect_with_backtracking(const Scene& scene, const Episode& episode, Policy& student, Policy& teacher,
                                       const DaggerConfig& cfg) {
  require(cfg.beta >= 0.0 && cfg.beta <= 1.0, "beta must lie in [0, 1]");
  require(cfg.backtrack_frames >= 1, "backtrack_frames must be at least 1");
  const HarnessConfig& hc = cfg.harness;
  hc.limits.validate();

  DaggerResult out;
  Rng rng(cfg.seed);
  student.reset(episode, derive_seed(cfg.seed, "student"));
  teacher.reset(episode, derive_seed(cfg.seed, "teacher"));

  // `branch` holds control_log indices of the live trajectory.
  std::vector<std::size_t> branch;
  auto push = [&](const UavState& s) {
    out.control_log.push_back(s);
    branch.push_back(out.control_log.size() - 1);
  };
  push(hover_state(episode.start));
  auto current = [&]() -> const UavState& { return out.control_log[branch.back()]; };
  const bool render_images = student.needs_images() || teacher.needs_images() || hc.always_render;

  auto land_now = [&] {
    for (const auto& s : land(current(), hc.limits, scene)) push(s);
    const double d = distance(current().pose.position, episode.target.position);
    out.outcome = d <= hc.success_radius ? Outcome::Success : Outcome::LandedFar;
  };

  bool force_teacher = false;
  std::size_t last_revert_pos = 0;
  int backtracks = 0;
  for (int decision = 0;; ++decision) {
    if (hc.detection_landing && oracle_detect(scene, current().pose, episode.target, hc.camera, hc.detection_range)) {
      const Vec3 approach = episode.target.position + Vec3{0.0, 0.0, hc.approach_height};
      if (segment_clear(scene, current().pose.position, approach, hc.limits.collision_radius + 0.5)) {
        const double yaw = current().pose.yaw + relative_bearing(current().pose, episode.target.position).yaw_offset;
        const auto flight = fly_to_waypoint(current(), Pose(approach, 0.0, 0.0, yaw), hc.limits, scene);
        for (std::size_t i = 1; i < flight.states.size(); ++i) push(flight.states[i]);
        if (!flight.collision) {
          land_now();
          break;
        }
        out.dropped = true;
        out.drop_reason = "collision during the final approach";
        out.outcome = Outcome::Collision;
        break;
      }
    }
    if (decision >= hc.max_decisions) {
      out.outcome = Outcome::Timeout;
      break;
    }

    const Observation obs = build_observation(scene, current(), episode, cfg.assistant, hc, decision, render_images);
    const bool recovering = force_teacher;
    const bool use_student = !force_teacher && rng.bernoulli(cfg.beta);
    force_teacher = false;
    Policy& actor = use_student ? student : teacher;
    PolicyCommand cmd;
    try {
      cmd = actor.act(obs);
      validate_command(cmd, hc.max_waypoints);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Protocol) throw;
      out.dropped = true;
      out.drop_reason = "decision " + std::to_string(decision) + ": " + e.what();
      out.outcome = Outcome::ProtocolError;
      break;
    }
    out.events.push_back(DaggerEvent{decision, use_student ? DaggerEventKind::ModelAction
                                                           : DaggerEventKind::TeacherAction,
                                     std::nullopt, std::nullopt, std::nullopt});

    bool collided = false;
    for (const Pose& wp : cmd.waypoints) {
      const auto flight = fly_to_waypoint(current(), clamp_to_bounds(wp, scene.bounds()), hc.limits, scene);
      for (std::size_t i = 1; i < flight.states.size(); ++i) push(flight.states[i]);
      if (flight.collision) {
        collided = true;
        break;
      }
    }
    if (collided) {
      // A teacher that cannot recover from the reverted state walks the
      // revert point further back instead of retrying from the same place.
      const std::size_t colliding_pos = recovering ? last_revert_pos : branch.size() - 1;
      const auto kind = use_student ? DaggerEventKind::CollisionBacktrack : DaggerEventKind::RecoveryBacktrack;
      const auto frames = static_cast<std::size_t>(cfg.backtrack_frames);
      if (colliding_pos < frames) {
        out.dropped = true;
        out.drop_reason = "collision within the first " + std::to_string(frames) + " control frames";
        out.outcome = Outcome::Collision;
        break;
      }
      if (++backtracks > cfg.max_backtracks) {
        out.dropped = true;
        out.drop_reason = "backtrack budget exhausted";
        out.outcome = Outcome::Collision;
        break;
      }
      const std::size_t collision_index = branch.back();
      last_revert_pos = colliding_pos - frames;
      branch.resize(last_revert_pos + 1);
      out.events.push_back(DaggerEvent{decision, kind, collision_index, branch.back(),
                                       out.control_log[branch.back()]});
      force_teacher = true;
      continue;
    }
    if (cmd.declare_landing) {
      land_now();
      break;
    }
  }

  std::vector<UavState> live;
  live.reserve(branch.size());
  for (std::size_t idx : branch) live.push_back(out.control_log[idx]);
  out.record = record_flight(live, cfg.record_dt, hc.limits.dt);
  out.record.episode_id = episode.id;
  out.record.source = RecordSource::Dagger;
  out.record.discarded = out.dropped;
  out.record.discard_reason = out.drop_reason;
  return out;
}

std::string compass_sector(double dx, double dy) {
  static const std::array<const char*, 8> kNames = {"east", "northeast", "north", "northwest",
                                                   "west", "southwest", "south", "southeast"};
  const double a = std::atan2(dy, dx);
  int idx = static_cast<int>(std::lround(a / (std::numbers::pi / 4.0)));
  idx = ((idx % 8) + 8) % 8;
  return kNames[static_cast<std::size_t>(idx)];
}

namespace {

std::string object_phrase(std::string_view category) {
  if (category == "car") return "The target is a parked car.";
  if (category == "truck") return "The target is a large truck.";
  if (category == "human") return "The target is a human standing on the ground.";
  if (category == "animal") return "The target is an animal resting on the ground.";
  if (category == "sign") return "The target is a standing sign.";
  if (category == "bicycle") return "The target is a bicycle left on the ground.";
  if (category == "tent") return "The target is a tent.";
  return "The target is a " + std::string(category) + ".";
}

std::string with_article(std::string_view noun) {
  const bool vowel = !noun.empty() && std::string_view("aeiou").find(noun.front()) != std::string_view::npos;
  return std::string(vowel ? "an " : "a ") + std::string(noun);
}

}  // namespace

TargetDescription generate_description(const Pose& start, const PlacedObject& target, const Scene& scene,
                                       const DescriptionConfig& cfg) {
  TargetDescription d;
  const Vec3 delta = target.position - start.position;
  const double range = delta.horizontal_norm();
  const long rounded = std::max(50L, std::lround(range / 50.0) * 50L);
  d.direction_text = "The target is to the " + compass_sector(delta.x, delta.y) + ", roughly " +
                     std::to_string(rounded) + " meters away";
  if (delta.z <= -cfg.level_band)
    d.direction_text += ", below your altitude";
  else if (delta.z >= cfg.level_band)
    d.direction_text += ", above your altitude";
  d.direction_text += ".";

  d.object_text = object_phrase(target.category);

  struct Neighbor {
    double dist;
    std::string noun;
    Vec3 at;
  };
  std::vector<Neighbor> near;
  for (const auto& ob : scene.obstacles()) {
    const double dist = distance_to(ob.shape, target.position);
    if (dist <= cfg.neighbor_radius)
      near.push_back({dist, std::string(material_name(ob.material)), footprint(ob.shape).center()});
  }
  for (const auto& o : scene.objects()) {
    if (o.position == target.position) continue;
    const double dist = distance(o.position, target.position);
    if (dist <= cfg.neighbor_radius) near.push_back({dist, o.category, o.position});
  }
  std::stable_sort(near.begin(), near.end(), [](const Neighbor& a, const Neighbor& b) { return a.dist < b.dist; });
  if (near.size() > static_cast<std::size_t>(cfg.max_neighbors)) near.resize(static_cast<std::size_t>(cfg.max_neighbors));
  if (near.empty()) {
    d.environment_text = "It stands in an open area with nothing else nearby.";
  } else {
    d.environment_text = "Nearby there is ";
    for (std::size_t i = 0; i < near.size(); ++i) {
      if (i > 0) d.environment_text += i + 1 == near.size() ? " and " : ", ";
      const Vec3 rel = near[i].at - target.position;
      d.environment_text += with_article(near[i].noun);
      if (rel.horizontal_norm() > 1e-6) d.environment_text += " to its " + compass_sector(rel.x, rel.y);
    }
    d.environment_text += ".";
  }
  return d;
}

std::vector<std::string> Split::ids() const {
  std::vector<std::string> out = easy;
  out.insert(out.end(), hard.begin(), hard.end());
  std::sort(out.begin(), out.end());
  return out;
}

DatasetSplits split_dataset(std::span<const Episode> episodes, const SplitConfig& cfg) {
  require(cfg.test_seen_fraction >= 0.0 && cfg.test_seen_fraction <= 1.0, "test_seen_fraction must lie in [0, 1]");
  std::vector<const Episode*> sorted;
  for (const auto& e : episodes) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Episode* a, const Episode* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    require(sorted[i]->id != sorted[i - 1]->id, "duplicate episode id '" + sorted[i]->id + "'");

  DatasetSplits out;
  auto put = [](Split& s, const Episode& e) {
    (classify_difficulty(path_length(e.gt)) == Difficulty::Easy ? s.easy : s.hard).push_back(e.id);
  };
  std::vector<const Episode*> remainder;
  for (const Episode* e : sorted) {
    if (cfg.holdout_scenes.count(e->scene_id))
      put(out.test_unseen_map, *e);
    else if (cfg.holdout_categories.count(e->target.category))
      put(out.test_unseen_object, *e);
    else
      remainder.push_back(e);
  }
  Rng rng(cfg.seed);
  for (std::size_t i = remainder.size(); i > 1; --i) std::swap(remainder[i - 1], remainder[rng.below(i)]);
  const auto n_seen = static_cast<std::size_t>(std::llround(cfg.test_seen_fraction * static_cast<double>(remainder.size())));
  for (std::size_t i = 0; i < remainder.size(); ++i) put(i < n_seen ? out.test_seen : out.train, *remainder[i]);
  for (Split* s : {&out.train, &out.test_seen, &out.test_unseen_map, &out.test_unseen_object}) {
    std::sort(s->easy.begin(), s->easy.end());
    std::sort(s->hard.begin(), s->hard.end());
    if (s->size() == 0) out.empty_splits.push_back(s->name);
  }
  return out;
}

namespace {

static_assert(sizeof(FrameHeader) == 28);

void put_u32(std::string& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

uint32_t get_u32(std::string_view in, std::size_t at) {
  uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<uint32_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
  return v;
}

void put_header(std::string& out, View view, uint8_t dtype, int w, int h, double fov, float max_range,
                uint32_t payload) {
  out.append("UVF1", 4);
  out.push_back(static_cast<char>(view));
  out.push_back(static_cast<char>(dtype));
  out.push_back(0);
  out.push_back(0);
  put_u32(out, static_cast<uint32_t>(w));
  put_u32(out, static_cast<uint32_t>(h));
  put_u32(out, std::bit_cast<uint32_t>(static_cast<float>(fov)));
  put_u32(out, std::bit_cast<uint32_t>(max_range));
  put_u32(out, payload);
}

}  // namespace

std::string encode_frame_file(const SensorFrame& frame) {
  std::string out;
  for (const auto& d : frame.depths) {
    put_header(out, d.view, 0, d.width, d.height, d.fov_deg, d.max_range, static_cast<uint32_t>(d.values.size() * 4));
    for (float v : d.values) put_u32(out, std::bit_cast<uint32_t>(v));
  }
  for (const auto& s : frame.semantics) {
    put_header(out, s.view, 1, s.width, s.height, s.fov_deg, 0.0f, static_cast<uint32_t>(s.labels.size()));
    out.append(reinterpret_cast<const char*>(s.labels.data()), s.labels.size());
  }
  return out;
}

SensorFrame decode_frame_file(std::string_view bytes, double time) {
  SensorFrame f;
  f.time = time;
  std::size_t at = 0;
  while (at < bytes.size()) {
    require(bytes.size() - at >= sizeof(FrameHeader) && bytes.substr(at, 4) == "UVF1", "corrupt frame file",
            ErrorCode::Parse);
    const auto view = static_cast<View>(static_cast<uint8_t>(bytes[at + 4]));
    const auto dtype = static_cast<uint8_t>(bytes[at + 5]);
    const auto w = static_cast<int>(get_u32(bytes, at + 8));
    const auto h = static_cast<int>(get_u32(bytes, at + 12));
    const float fov = std::bit_cast<float>(get_u32(bytes, at + 16));
    const float max_range = std::bit_cast<float>(get_u32(bytes, at + 20));
    const uint32_t payload = get_u32(bytes, at + 24);
    at += sizeof(FrameHeader);
    require(bytes.size() - at >= payload, "truncated frame payload", ErrorCode::Parse);
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (dtype == 0) {
      require(payload == n * 4, "depth payload size mismatch", ErrorCode::Parse);
      DepthImage d;
      d.view = view;
      d.width = w;
      d.height = h;
      d.fov_deg = fov;
      d.max_range = max_range;
      d.values.resize(n);
      for (std::size_t i = 0; i < n; ++i) d.values[i] = std::bit_cast<float>(get_u32(bytes, at + 4 * i));
      f.depths.push_back(std::move(d));
    } else {
      require(dtype == 1 && payload == n, "semantic payload size mismatch", ErrorCode::Parse);
      SemanticImage s;
      s.view = view;
      s.width = w;
      s.height = h;
      s.fov_deg = fov;
      s.labels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                      bytes.begin() + static_cast<std::ptrdiff_t>(at + n));
      f.semantics.push_back(std::move(s));
    }
    at += payload;
  }
  return f;
}

namespace {

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu.bin", i);
  return buf;
}

std::string read_binary(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + p.string(), ErrorCode::Io);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::filesystem::path write_dataset_entry(const std::filesystem::path& root, const Episode& episode,
                                          const TrajectoryRecord& record, std::span<const DaggerEvent> events) {
  namespace fs = std::filesystem;
  fs::path dir = root / episode.id;
  for (int n = 1; fs::exists(dir); ++n) dir = root / (episode.id + "-" + std::to_string(n));
  fs::create_directories(dir / "frames");

  write_text_file(dir / "episode.json", json(episode).dump(2) + "\n");
  const json meta = {{"version", 1},
                     {"episode_id", record.episode_id},
                     {"source", record_source_name(record.source)},
                     {"record_dt", record.record_dt},
                     {"discarded", record.discarded},
                     {"discard_reason", record.discard_reason},
                     {"n_states", record.states.size()},
                     {"n_frames", record.frames.size()},
                     {"path_length", path_length(record.trajectory())}};
  write_text_file(dir / "record.json", meta.dump(2) + "\n");

  std::string lines;
  for (const auto& s : record.states) lines += json(s).dump() + "\n";
  write_text_file(dir / "trajectory.jsonl", lines);

  lines.clear();
  for (const auto& e : events) {
    json j = {{"step", e.step}, {"kind", dagger_event_name(e.kind)}};
    if (e.collision_index) j["collision_index"] = *e.collision_index;
    if (e.reverted_to) j["reverted_to"] = *e.reverted_to;
    if (e.reverted_state) j["reverted_state"] = *e.reverted_state;
    lines += j.dump() + "\n";
  }
  write_text_file(dir / "events.jsonl", lines);

  for (std::size_t i = 0; i < record.frames.size(); ++i)
    write_text_file(dir / "frames" / frame_name(i), encode_frame_file(record.frames[i]));
  return dir;
}

DatasetEntry read_dataset_entry(const std::filesystem::path& dir, bool with_frames) {
  DatasetEntry entry;
  entry.episode = read_json_file(dir / "episode.json").get<Episode>();
  const json meta = read_json_file(dir / "record.json");
  TrajectoryRecord& rec = entry.record;
  rec.episode_id = meta.at("episode_id").get<std::string>();
  rec.source = record_source_from_name(meta.at("source").get<std::string>());
  rec.record_dt = meta.at("record_dt").get<double>();
  rec.discarded = meta.at("discarded").get<bool>();
  rec.discard_reason = meta.at("discard_reason").get<std::string>();
  for (const auto& j : read_jsonl_file(dir / "trajectory.jsonl")) rec.states.push_back(j.get<UavState>());
  if (with_frames) {
    const auto n = meta.at("n_frames").get<std::size_t>();
    require(n <= rec.states.size(), "more frames than states in " + dir.string(), ErrorCode::Parse);
    for (std::size_t i = 0; i < n; ++i)
      rec.frames.push_back(decode_frame_file(read_binary(dir / "frames" / frame_name(i)), rec.states[i].time));
  }
  return entry;
}

}  // namespace uavnav
