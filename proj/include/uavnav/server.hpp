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

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "uavnav/collection.hpp"
#include "uavnav/generation.hpp"
#include "uavnav/net.hpp"

namespace uavnav {

struct ServerConfig {
  std::string bind = "127.0.0.1:0";  // overridden by UAVNAV_BIND when empty
  std::optional<std::filesystem::path> manifest;
  std::filesystem::path record_dir = "recordings";
  double stream_hz = 10.0;
  int stream_res = 32;
  double time_scale = 1.0;  // simulated seconds per wall second, realtime clock
  double record_dt = 0.5;
  int bridge_timeout_ms = 10000;
  AssistantConfig assistant;
  HarnessConfig harness;

  void validate() const;
};

enum class ControlMode { Manual, Position, Landing };

// One environment per session. Several connections may attach; at most one
// of them controls it.
struct Session {
  std::string id;
  std::mutex mu;
  bool has_controller = false;
  std::list<std::shared_ptr<net::FrameChannel>> observers;

  std::optional<Episode> episode;
  const Scene* scene = nullptr;
  UavState state;
  ControlMode mode = ControlMode::Manual;
  VelocityCommand manual;
  std::optional<Pose> position_target;
  std::vector<UavState> stream;  // control-rate states since episode start
  bool recording = false;
  bool target_reached = false;
  bool discarded = false;
  std::string discard_reason;
  bool landed = false;
  int step = 0;
  std::string last_guidance;
};

class Server {
 public:
  explicit Server(ServerConfig cfg);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  uint16_t port() const { return listener_->port(); }
  // Blocks until stop() is called from another thread.
  void run();
  void stop();

 private:
  void accept_loop();
  void serve_connection(std::shared_ptr<net::FrameChannel> channel);

  ServerConfig cfg_;
  std::optional<EpisodeStore> store_;
  std::unique_ptr<net::Listener> listener_;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;

  std::mutex mu_;
  std::condition_variable stopped_cv_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::list<net::FrameChannel*> live_channels_;
  std::list<std::thread> workers_;
  uint64_t next_session_ = 1;

  friend class Connection;
};

}  // namespace uavnav
