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

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "uavnav/episode.hpp"
#include "uavnav/rng.hpp"

namespace uavnav {

enum class RecordSource { Human, Teacher, Dagger };
std::string_view record_source_name(RecordSource s);
RecordSource record_source_from_name(std::string_view name);

struct SensorFrame {
  double time = 0.0;
  std::vector<DepthImage> depths;
  std::vector<SemanticImage> semantics;
  bool operator==(const SensorFrame&) const = default;
};

struct TrajectoryRecord {
  std::string episode_id;
  double record_dt = 0.5;
  std::vector<UavState> states;
  std::vector<SensorFrame> frames;  // empty until backfilled
  RecordSource source = RecordSource::Human;
  bool discarded = false;
  std::string discard_reason;

  Trajectory trajectory() const;
  bool operator==(const TrajectoryRecord&) const = default;
};

// Subsamples a control-rate state stream. record_dt must be a whole multiple
// of control_dt and the stream timestamps must be evenly spaced.
TrajectoryRecord record_flight(std::span<const UavState> stream, double record_dt, double control_dt);

// Renders all five depth and semantic views at every recorded state.
TrajectoryRecord backfill_sensors(const TrajectoryRecord& record, const Scene& scene, const CameraConfig& cam = {});

// CollisionBacktrack follows a collision caused by the student's command and
// always reverts exactly backtrack_frames control frames. A collision during
// a teacher command is a RecoveryBacktrack; if it happens right after a
// revert, the revert point moves a further backtrack_frames back.
enum class DaggerEventKind { ModelAction, CollisionBacktrack, TeacherAction, RecoveryBacktrack };
std::string_view dagger_event_name(DaggerEventKind k);

struct DaggerEvent {
  int step = 0;  // decision index
  DaggerEventKind kind = DaggerEventKind::ModelAction;
  // Backtracks only: indices into DaggerResult::control_log.
  std::optional<std::size_t> collision_index;
  std::optional<std::size_t> reverted_to;
  std::optional<UavState> reverted_state;
};

struct DaggerConfig {
  double beta = 0.7;  // probability of executing the student's command
  int backtrack_frames = 2;
  double record_dt = 0.5;
  int max_backtracks = 50;
  uint64_t seed = 0;
  HarnessConfig harness;
  AssistantConfig assistant;
};

struct DaggerResult {
  TrajectoryRecord record;
  std::vector<DaggerEvent> events;
  // Every control state produced, including branches abandoned by a backtrack.
  std::vector<UavState> control_log;
  Outcome outcome = Outcome::Timeout;
  bool dropped = false;
  std::string drop_reason;
};

DaggerResult collect_with_backtracking(const Scene& scene, const Episode& episode, Policy& student, Policy& teacher,
                                       const DaggerConfig& cfg);

// Eight compass sectors with north along +y.
std::string compass_sector(double dx, double dy);

struct DescriptionConfig {
  double neighbor_radius = 30.0;
  int max_neighbors = 3;
  double level_band = 10.0;  // |dz| below this is reported as level
};

TargetDescription generate_description(const Pose& start, const PlacedObject& target, const Scene& scene,
                                       const DescriptionConfig& cfg = {});

struct SplitConfig {
  std::set<std::string> holdout_scenes;
  std::set<std::string> holdout_categories;
  double test_seen_fraction = 0.1;
  uint64_t seed = 0;
};

struct Split {
  std::string name;
  std::vector<std::string> easy;
  std::vector<std::string> hard;

  std::size_t size() const { return easy.size() + hard.size(); }
  std::vector<std::string> ids() const;
};

struct DatasetSplits {
  Split train{"train", {}, {}};
  Split test_seen{"test_seen", {}, {}};
  Split test_unseen_map{"test_unseen_map", {}, {}};
  Split test_unseen_object{"test_unseen_object", {}, {}};
  std::vector<std::string> empty_splits;

  std::vector<const Split*> all() const { return {&train, &test_seen, &test_unseen_map, &test_unseen_object}; }
};

DatasetSplits split_dataset(std::span<const Episode> episodes, const SplitConfig& cfg);

// Dataset layout, one directory per recording:
//   episode.json, record.json, trajectory.jsonl, events.jsonl, frames/NNNNN.bin
// A frame file holds the depth then semantic image of every view, each a
// 28-byte little-endian header followed by the row-major payload.
struct FrameHeader {
  char magic[4] = {'U', 'V', 'F', '1'};
  uint8_t view = 0;
  uint8_t dtype = 0;  // 0 = f32le depth, 1 = u8 semantic
  uint16_t reserved = 0;
  uint32_t width = 0;
  uint32_t height = 0;
  float fov_deg = 0.0f;
  float max_range = 0.0f;
  uint32_t payload_bytes = 0;
};

std::string encode_frame_file(const SensorFrame& frame);
SensorFrame decode_frame_file(std::string_view bytes, double time);

std::filesystem::path write_dataset_entry(const std::filesystem::path& root, const Episode& episode,
                                          const TrajectoryRecord& record, std::span<const DaggerEvent> events = {});

struct DatasetEntry {
  Episode episode;
  TrajectoryRecord record;
};
DatasetEntry read_dataset_entry(const std::filesystem::path& dir, bool with_frames = true);

}  // namespace uavnav
