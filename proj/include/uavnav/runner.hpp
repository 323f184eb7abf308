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
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uavnav/generation.hpp"
#include "uavnav/metrics.hpp"
#include "uavnav/policies.hpp"

namespace uavnav {

struct RunConfig {
  int n_envs = 1;
  uint64_t base_seed = 0;
  AssistantConfig assistant;
  PolicySpec policy;
  HarnessConfig harness;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> split_file;  // JSONL of episode ids to keep
  std::filesystem::path output;                     // results JSONL; report goes next to it
  OsrMode osr = OsrMode::Goal;

  void validate() const;
};

struct RunOutput {
  std::vector<EpisodeResult> results;  // sorted by episode id
  MetricReport report;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

// Workers pull episodes from a shared counter; each episode gets the seed
// derive_seed(base_seed, episode id), so outcomes do not depend on n_envs.
std::vector<EpisodeResult> run_parallel(const EpisodeStore& store, std::span<const Episode> episodes,
                                        const PolicyFactory& factory, const AssistantConfig& assistant,
                                        const HarnessConfig& harness, uint64_t base_seed, int n_envs);

MetricReport report_for(std::span<const EpisodeResult> results, std::span<const Episode> episodes,
                        double success_radius = kSuccessRadius, OsrMode osr = OsrMode::Goal);

// Loads the manifest, runs, writes <output> (results JSONL) and
// <output>.report.json, and returns both.
RunOutput evaluate(const RunConfig& cfg);

std::string results_to_jsonl(std::span<const EpisodeResult> results);
std::vector<EpisodeResult> read_results(const std::filesystem::path& path);

// Recomputes the report from a stored results file and its manifest.
MetricReport replay(const std::filesystem::path& results, const std::filesystem::path& manifest,
                    OsrMode osr = OsrMode::Goal);

std::set<std::string> read_id_list(const std::filesystem::path& path);

}  // namespace uavnav
