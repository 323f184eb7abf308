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

#include "uavnav/runner.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "uavnav/error.hpp"
#include "uavnav/serialization.hpp"

namespace uavnav {

void RunConfig::validate() const {
  require(n_envs >= 1, "n_envs must be at least 1");
  require(!manifest.empty(), "an episode manifest is required");
  require(!output.empty(), "an output path is required");
  policy.validate();
  assistant.validate(harness.success_radius);
  harness.limits.validate();
}

std::vector<EpisodeResult> run_parallel(const EpisodeStore& store, std::span<const Episode> episodes,
                                        const PolicyFactory& factory, const AssistantConfig& assistant,
                                        const HarnessConfig& harness, uint64_t base_seed, int n_envs) {
  require(!episodes.empty(), "no episodes to run");
  require(n_envs >= 1, "n_envs must be at least 1");
  std::vector<EpisodeResult> results(episodes.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::unique_ptr<Policy> policy = factory();
    for (std::size_t i = next++; i < episodes.size(); i = next++) {
      const Episode& e = episodes[i];
      try {
        results[i] = run_episode(store.scene_for(e), e, *policy, assistant, harness, derive_seed(base_seed, e.id));
      } catch (const std::exception& ex) {
        EpisodeResult r;
        r.episode_id = e.id;
        r.executed.append(0.0, e.start);
        r.outcome = Outcome::Errored;
        r.final_distance = distance(e.start.position, e.target.position);
        r.error = ex.what();
        results[i] = std::move(r);
        policy = factory();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::min<int64_t>(n_envs, static_cast<int64_t>(episodes.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < n; ++k) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  std::sort(results.begin(), results.end(),
            [](const EpisodeResult& a, const EpisodeResult& b) { return a.episode_id < b.episode_id; });
  return results;
}

MetricReport report_for(std::span<const EpisodeResult> results, std::span<const Episode> episodes,
                        double success_radius, OsrMode osr) {
  std::map<std::string, const Episode*> by_id;
  for (const auto& e : episodes) by_id[e.id] = &e;
  std::vector<EpisodeStats> stats;
  for (const auto& r : results) {
    const auto it = by_id.find(r.episode_id);
    require(it != by_id.end(), "result for unknown episode '" + r.episode_id + "'");
    stats.push_back(episode_stats(r, *it->second, success_radius, osr));
  }
  return aggregate(stats);
}

std::string results_to_jsonl(std::span<const EpisodeResult> results) {
  std::string out;
  for (const auto& r : results) out += dump_canonical(json(r)) + "\n";
  return out;
}

std::vector<EpisodeResult> read_results(const std::filesystem::path& path) {
  std::vector<EpisodeResult> out;
  for (const auto& j : read_jsonl_file(path)) out.push_back(j.get<EpisodeResult>());
  return out;
}

std::set<std::string> read_id_list(const std::filesystem::path& path) {
  std::set<std::string> ids;
  for (const auto& j : read_jsonl_file(path)) {
    if (j.is_string())
      ids.insert(j.get<std::string>());
    else
      ids.insert(j.at("episode_id").get<std::string>());
  }
  return ids;
}

RunOutput evaluate(const RunConfig& cfg) {
  cfg.validate();
  const EpisodeStore store = load_store(cfg.manifest);
  std::vector<Episode> episodes = store.episodes;
  if (cfg.split_file) {
    const auto keep = read_id_list(*cfg.split_file);
    std::erase_if(episodes, [&](const Episode& e) { return !keep.count(e.id); });
  }
  require(!episodes.empty(), "no episodes selected from " + cfg.manifest.string());
  RunOutput out;
  out.results = run_parallel(
      store, episodes, [&] { return make_policy(cfg.policy); }, cfg.assistant, cfg.harness, cfg.base_seed,
      cfg.n_envs);
  out.report = report_for(out.results, episodes, cfg.harness.success_radius, cfg.osr);
  write_text_file(cfg.output, results_to_jsonl(out.results));
  write_text_file(cfg.output.string() + ".report.json", json(out.report).dump(2) + "\n");
  return out;
}

MetricReport replay(const std::filesystem::path& results, const std::filesystem::path& manifest, OsrMode osr) {
  const auto stored = read_results(results);
  require(!stored.empty(), "results file " + results.string() + " is empty");
  return report_for(stored, read_manifest(manifest), kSuccessRadius, osr);
}

}  // namespace uavnav
