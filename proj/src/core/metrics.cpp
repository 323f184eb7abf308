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

#include "uavnav/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "uavnav/error.hpp"

namespace uavnav {

EpisodeStats episode_stats(const EpisodeResult& result, const Episode& episode, double success_radius, OsrMode osr) {
  require(!result.executed.empty(), "episode_stats: executed trajectory is empty");
  require(result.episode_id == episode.id, "episode_stats: result does not belong to episode " + episode.id);
  EpisodeStats s;
  s.episode_id = episode.id;
  s.difficulty = episode.difficulty;
  s.success = result.outcome == Outcome::Success ? 1.0 : 0.0;
  s.ne = result.final_distance;

  double closest = std::numeric_limits<double>::infinity();
  for (const auto& p : result.executed.points()) {
    const double d = osr == OsrMode::Goal ? distance(p.pose.position, episode.target.position)
                                          : nearest_gt_point(episode.gt, p.pose.position).distance;
    closest = std::min(closest, d);
  }
  s.oracle_success = closest <= success_radius ? 1.0 : 0.0;

  const double l = path_length(episode.gt);
  const double p = path_length(result.executed);
  const double denom = std::max(p, l);
  s.spl_term = s.success > 0.0 ? (denom > 0.0 ? l / denom : 1.0) : 0.0;
  return s;
}

namespace {

MetricRow row_of(std::span<const EpisodeStats> stats, const Difficulty* filter) {
  MetricRow r;
  double sr = 0, osr = 0, spl = 0, ne = 0;
  for (const auto& s : stats) {
    if (filter && s.difficulty != *filter) continue;
    ++r.n;
    sr += s.success;
    osr += s.oracle_success;
    spl += s.spl_term;
    ne += s.ne;
  }
  if (r.n == 0) return r;
  const double n = static_cast<double>(r.n);
  r.sr = 100.0 * sr / n;
  r.osr = 100.0 * osr / n;
  r.spl = 100.0 * spl / n;
  r.ne = ne / n;
  return r;
}

}  // namespace

MetricReport aggregate(std::span<const EpisodeStats> stats) {
  require(!stats.empty(), "aggregate: no episodes");
  // Sum in a canonical order so the result does not depend on input order.
  std::vector<EpisodeStats> sorted(stats.begin(), stats.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EpisodeStats& a, const EpisodeStats& b) { return a.episode_id < b.episode_id; });
  MetricReport r;
  r.n_episodes = sorted.size();
  const Difficulty easy = Difficulty::Easy, hard = Difficulty::Hard;
  r.full = row_of(sorted, nullptr);
  r.easy = row_of(sorted, &easy);
  r.hard = row_of(sorted, &hard);
  return r;
}

std::string format_report_table(const MetricReport& report, const std::string& label) {
  std::string out;
  char buf[256];
  if (!label.empty()) out += label + "\n";
  std::snprintf(buf, sizeof buf, "%-6s %6s %9s %8s %8s %8s\n", "split", "n", "NE(m)", "SR", "OSR", "SPL");
  out += buf;
  const std::pair<const char*, const MetricRow*> rows[] = {{"full", &report.full}, {"easy", &report.easy},
                                                           {"hard", &report.hard}};
  for (const auto& [name, row] : rows) {
    std::snprintf(buf, sizeof buf, "%-6s %6zu %9.2f %8.2f %8.2f %8.2f\n", name, row->n, row->ne, row->sr, row->osr,
                  row->spl);
    out += buf;
  }
  return out;
}

}  // namespace uavnav
