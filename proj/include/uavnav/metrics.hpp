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

#include <span>
#include <string>

#include "uavnav/episode.hpp"

namespace uavnav {

// Goal: success credited when any executed point comes within the success
// radius of the target. Path: the literal "reaches any location along the
// ground-truth trajectory" reading, kept for comparison.
enum class OsrMode { Goal, Path };

struct EpisodeStats {
  std::string episode_id;
  Difficulty difficulty = Difficulty::Easy;
  double success = 0.0;
  double oracle_success = 0.0;
  double ne = 0.0;
  double spl_term = 0.0;
};

EpisodeStats episode_stats(const EpisodeResult& result, const Episode& episode, double success_radius = kSuccessRadius,
                           OsrMode osr = OsrMode::Goal);

struct MetricRow {
  std::size_t n = 0;
  double sr = 0.0;   // percent
  double osr = 0.0;  // percent
  double spl = 0.0;  // percent
  double ne = 0.0;   // meters
};

struct MetricReport {
  std::size_t n_episodes = 0;
  MetricRow full;
  MetricRow easy;
  MetricRow hard;
};

MetricReport aggregate(std::span<const EpisodeStats> stats);

// Table with NE, SR, OSR, SPL for full/easy/hard, two decimals.
std::string format_report_table(const MetricReport& report, const std::string& label = "");

}  // namespace uavnav
