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

#include "uavnav/server.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <set>

#include "uavnav/error.hpp"
#include "uavnav/policies.hpp"
#include "uavnav/wire.hpp"

namespace uavnav {

void ServerConfig::validate() const {
  require(stream_hz > 0.0 && stream_res >= 8, "stream rate must be positive and stream_res at least 8");
  require(time_scale > 0.0, "time_scale must be positive");
  require(bridge_timeout_ms > 0, "bridge timeout must be positive");
  harness.limits.validate();
}

class Connection {
 public:
  Connection(Server& srv, std::shared_ptr<net::FrameChannel> ch) : srv_(srv), self_(std::move(ch)), ch_(*self_) {}
  ~Connection() { detach(); }
  void run();

 private:
  using Clock = std::chrono::steady_clock;

  void send(const json& j) { ch_.send(j.dump()); }
  void error(const std::string& code, const std::string& message) {
    send({{"type", "error"}, {"v", kWireVersion}, {"code", code}, {"message", message}});
  }
  // Sends to this connection and every observer of the session.
  void broadcast(const json& j);
  void event(const std::string& name, json extra = json::object());

  void handle(const json& msg);
  void on_hello(const json& msg);
  void on_episode_request(const json& msg);
  void on_control(const json& msg);
  void on_save();
  void on_discard();
  void run_bridge_episode(const Episode& episode, const json& msg);

  void start_episode(const Episode& episode);
  void advance(int n);
  void advance_one();
  void send_obs();
  void detach();
  bool active() const { return session_ && controller_ && session_->episode.has_value(); }
  const ServerConfig& cfg() const { return srv_.cfg_; }

  Server& srv_;
  std::shared_ptr<net::FrameChannel> self_;
  net::FrameChannel& ch_;
  std::shared_ptr<Session> session_;
  bool hello_done_ = false;
  bool controller_ = false;
  bool bridge_ = false;
  bool lockstep_ = false;
  bool closing_ = false;
  Clock::time_point next_tick_ = Clock::now();
  int since_frame_ = 0;
};

void Connection::broadcast(const json& j) {
  const std::string text = j.dump();
  ch_.send(text);
  if (!session_) return;
  std::list<std::shared_ptr<net::FrameChannel>> observers;
  {
    std::lock_guard lock(session_->mu);
    observers = session_->observers;
  }
  for (const auto& o : observers) {
    try {
      o->send(text);
    } catch (const Error&) {
    }
  }
}

void Connection::event(const std::string& name, json extra) {
  extra["type"] = "event";
  extra["v"] = kWireVersion;
  extra["event"] = name;
  extra["t"] = session_->state.time;
  broadcast(extra);
}

void Connection::detach() {
  if (!session_) return;
  std::lock_guard lock(session_->mu);
  if (controller_) session_->has_controller = false;
  session_->observers.remove(self_);
  controller_ = false;
}

void Connection::run() {
  while (!srv_.stopping_ && !closing_) {
    net::Millis wait(200);
    const bool realtime = active() && !lockstep_;
    if (realtime) {
      wait = std::max(net::Millis(0), std::chrono::duration_cast<net::Millis>(next_tick_ - Clock::now()));
    }
    std::optional<std::string> text;
    try {
      text = ch_.receive(wait);
    } catch (const Error&) {
      return;
    }
    if (text) {
      json msg = json::parse(*text, nullptr, false);
      if (msg.is_discarded() || !msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
        error("malformed", "expected a JSON object with a string 'type'");
      } else {
        try {
          handle(msg);
        } catch (const json::exception& e) {
          error("malformed", e.what());
        } catch (const ProtocolError& e) {
          error("protocol", e.what());
        } catch (const Error& e) {
          if (e.code() == ErrorCode::Network) return;
          error("invalid", e.what());
        }
      }
    }
    if (active() && !lockstep_ && Clock::now() >= next_tick_) {
      const auto period = std::chrono::duration<double>(cfg().harness.limits.dt / cfg().time_scale);
      next_tick_ += std::chrono::duration_cast<Clock::duration>(period);
      if (next_tick_ < Clock::now()) next_tick_ = Clock::now();
      advance(1);
    }
  }
}

void Connection::handle(const json& msg) {
  const std::string type = msg["type"].get<std::string>();
  static const std::set<std::string> kKnown = {"hello", "bye",  "list_episodes", "take_control", "episode_request",
                                                "control", "land", "tick", "observe", "save", "discard"};
  if (!kKnown.contains(type)) return error("unknown_type", "unknown message type '" + type + "'");
  if (type == "hello") return on_hello(msg);
  if (!hello_done_) return error("no_hello", "the first message must be hello");
  if (type == "bye") {
    closing_ = true;
    return;
  }
  if (type == "list_episodes") {
    json list = json::array();
    if (srv_.store_)
      for (const auto& e : srv_.store_->episodes)
        list.push_back({{"id", e.id},
                        {"scene_id", e.scene_id},
                        {"difficulty", difficulty_name(e.difficulty)},
                        {"task_text", e.description.task_text()}});
    return send({{"type", "episodes"}, {"v", kWireVersion}, {"episodes", list}});
  }
  if (type == "take_control") {
    std::lock_guard lock(session_->mu);
    if (session_->has_controller && !controller_) return error("controller_taken", "session already has a controller");
    session_->has_controller = true;
    session_->observers.remove(self_);
    controller_ = true;
    return send({{"type", "control_granted"}, {"v", kWireVersion}, {"session_id", session_->id}});
  }
  if (!controller_) return error("not_controller", "this connection is observing; send take_control first");
  if (type == "episode_request") return on_episode_request(msg);
  if (!session_->episode) return error("no_episode", "request an episode first");
  if (type == "control") return on_control(msg);
  if (type == "land") {
    std::lock_guard lock(session_->mu);
    session_->mode = ControlMode::Landing;
    session_->position_target.reset();
    return;
  }
  if (type == "tick") {
    if (!lockstep_) return error("not_lockstep", "tick is only valid with the lockstep clock");
    const int n = msg.value("n", 1);
    if (n < 1 || n > 100000) return error("invalid", "tick count must lie in [1, 100000]");
    advance(n);
    return send_obs();
  }
  if (type == "observe") return send_obs();
  if (type == "save") return on_save();
  on_discard();
}

void Connection::on_hello(const json& msg) {
  if (hello_done_) return error("duplicate_hello", "hello already received");
  if (!msg.contains("v") || !msg["v"].is_number_integer() || msg["v"].get<int>() != kWireVersion) {
    error("version_mismatch", "server speaks version " + std::to_string(kWireVersion));
    closing_ = true;
    return;
  }
  const std::string mode = msg.value("mode", "teleop");
  if (mode != "teleop" && mode != "bridge") return error("invalid", "mode must be teleop or bridge");
  bridge_ = mode == "bridge";
  const std::string clock = msg.value("clock", "realtime");
  if (clock != "realtime" && clock != "lockstep") return error("invalid", "clock must be realtime or lockstep");
  lockstep_ = clock == "lockstep";
  const std::string role = msg.value("role", "controller");
  if (role != "controller" && role != "observer") return error("invalid", "role must be controller or observer");

  {
    std::lock_guard lock(srv_.mu_);
    if (msg.contains("session_id") && msg["session_id"].is_string()) {
      const auto it = srv_.sessions_.find(msg["session_id"].get<std::string>());
      if (it == srv_.sessions_.end()) return error("unknown_session", "no such session");
      session_ = it->second;
    } else {
      session_ = std::make_shared<Session>();
      session_->id = "sess-" + std::to_string(srv_.next_session_++);
      srv_.sessions_[session_->id] = session_;
    }
  }
  hello_done_ = true;
  std::string granted = "observer";
  {
    std::lock_guard lock(session_->mu);
    if (role == "controller" && !session_->has_controller) {
      session_->has_controller = true;
      controller_ = true;
      granted = "controller";
    } else {
      session_->observers.push_back(self_);
    }
  }
  if (role == "controller" && !controller_) error("controller_taken", "session already has a controller");
  send({{"type", "hello_ack"},
        {"v", kWireVersion},
        {"session_id", session_->id},
        {"mode", mode},
        {"role", granted},
        {"clock", clock},
        {"dt", cfg().harness.limits.dt},
        {"stream_hz", cfg().stream_hz}});
}

void Connection::on_episode_request(const json& msg) {
  if (!srv_.store_) return error("no_store", "server was started without an episode manifest");
  const std::string id = msg.at("episode_id").get<std::string>();
  const Episode* found = nullptr;
  for (const auto& e : srv_.store_->episodes)
    if (e.id == id) found = &e;
  if (!found) return error("unknown_episode", "no episode '" + id + "'");
  if (bridge_) return run_bridge_episode(*found, msg);
  start_episode(*found);
}

void Connection::start_episode(const Episode& episode) {
  {
    std::lock_guard lock(session_->mu);
    Session& s = *session_;
    s.episode = episode;
    s.scene = &srv_.store_->scene_for(episode);
    s.state = hover_state(episode.start);
    s.mode = ControlMode::Manual;
    s.manual = VelocityCommand{};
    s.manual.body_frame = true;
    s.position_target.reset();
    s.stream = {s.state};
    s.recording = true;
    s.target_reached = false;
    s.discarded = false;
    s.discard_reason.clear();
    s.landed = false;
    s.step = 0;
    s.last_guidance.clear();
  }
  broadcast({{"type", "episode_start"},
             {"v", kWireVersion},
             {"episode", episode},
             {"scene", scene_to_json(*session_->scene)}});
  next_tick_ = Clock::now();
  since_frame_ = 0;
  send_obs();
}

void Connection::on_control(const json& msg) {
  const std::string mode = msg.at("mode").get<std::string>();
  Session& s = *session_;
  std::lock_guard lock(s.mu);
  if (mode == "manual") {
    VelocityCommand cmd;
    cmd.velocity = msg.at("velocity").get<Vec3>();
    cmd.yaw_rate = msg.value("yaw_rate", 0.0);
    cmd.body_frame = msg.value("body_frame", true);
    if (!cmd.velocity.finite() || !std::isfinite(cmd.yaw_rate)) return error("invalid_control", "non-finite command");
    s.manual = cmd;
    s.mode = ControlMode::Manual;
    s.position_target.reset();
  } else if (mode == "position") {
    const Pose target = msg.at("target").get<Pose>();
    if (!target.finite()) return error("invalid_control", "non-finite target");
    if (!s.scene->bounds().contains(target.position)) return error("out_of_bounds", "target lies outside the scene");
    s.position_target = target;
    s.mode = ControlMode::Position;
  } else {
    return error("invalid_control", "control mode must be manual or position");
  }
  s.landed = false;
}

void Connection::advance(int n) {
  for (int i = 0; i < n; ++i) advance_one();
  if (!lockstep_ && ++since_frame_ >= std::max(1, static_cast<int>(std::lround(1.0 / (cfg().stream_hz *
                                                                                      cfg().harness.limits.dt))))) {
    since_frame_ = 0;
    send_obs();
  }
}

void Connection::advance_one() {
  Session& s = *session_;
  std::vector<std::pair<std::string, json>> events;
  {
    std::lock_guard lock(s.mu);
    if (s.landed) return;
    const KinematicLimits& lim = cfg().harness.limits;
    VelocityCommand cmd;
    switch (s.mode) {
      case ControlMode::Manual:
        cmd = s.manual;
        break;
      case ControlMode::Position:
        cmd = s.position_target ? waypoint_command(s.state, *s.position_target, lim) : VelocityCommand{};
        break;
      case ControlMode::Landing:
        cmd.velocity = {0.0, 0.0, -lim.max_vertical_speed};
        break;
    }
    const StepResult r = step(s.state, cmd, lim, *s.scene);
    s.state = r.state;
    ++s.step;
    if (s.recording) s.stream.push_back(s.state);
    if (r.collision) {
      if (s.mode == ControlMode::Landing) {
        s.landed = true;
        s.recording = false;
        events.emplace_back("landed", json{{"distance", distance(s.state.pose.position, s.episode->target.position)}});
      } else {
        events.emplace_back("collision", json{{"position", s.state.pose.position}});
        if (!s.discarded) {
          s.discarded = true;
          s.recording = false;
          s.discard_reason = "collision";
          events.emplace_back("discarded", json{{"reason", s.discard_reason}});
        }
      }
      s.mode = ControlMode::Manual;
      s.manual = VelocityCommand{};
      s.position_target.reset();
    }
    if (s.mode == ControlMode::Position && s.position_target &&
        distance(s.state.pose.position, s.position_target->position) <= lim.reach_tolerance) {
      events.emplace_back("arrived", json{{"target", *s.position_target}});
      s.position_target.reset();
    }
    if (!s.target_reached && !s.discarded &&
        distance(s.state.pose.position, s.episode->target.position) <= kCollectionReach) {
      s.target_reached = true;
      s.recording = false;
      events.emplace_back("target_reached", json{{"distance", distance(s.state.pose.position,
                                                                       s.episode->target.position)}});
    }
  }
  for (auto& [name, extra] : events) event(name, std::move(extra));
}

void Connection::send_obs() {
  Session& s = *session_;
  json doc;
  std::optional<std::string> guidance;
  {
    std::lock_guard lock(s.mu);
    Observation obs = build_observation(*s.scene, s.state, *s.episode, cfg().assistant, cfg().harness, s.step, true);
    for (auto& d : obs.depths) d = downsample(d, cfg().stream_res);
    for (auto& m : obs.semantics) m = downsample(m, cfg().stream_res);
    doc = observation_to_wire(obs, /*downsampled=*/true);
    doc["type"] = "obs";
    doc["recording"] = s.recording;
    doc["target_reached"] = s.target_reached;
    doc["discarded"] = s.discarded;
    doc["landed"] = s.landed;
    const std::string text = obs.assistant_text.value_or("");
    if (text != s.last_guidance) {
      s.last_guidance = text;
      if (!text.empty()) guidance = text;
    }
  }
  if (guidance) event("guidance", {{"text", *guidance}});
  broadcast(doc);
}

void Connection::on_save() {
  Session& s = *session_;
  std::unique_lock lock(s.mu);
  if (s.discarded) return error("save_blocked", "recording was discarded: " + s.discard_reason);
  if (!s.target_reached) return error("save_blocked", "the UAV has not come within 5 m of the target");
  TrajectoryRecord rec = record_flight(s.stream, cfg().record_dt, cfg().harness.limits.dt);
  rec.episode_id = s.episode->id;
  rec.source = RecordSource::Human;
  const Episode episode = *s.episode;
  const Scene& scene = *s.scene;
  lock.unlock();
  rec = backfill_sensors(rec, scene, cfg().harness.camera);
  const auto dir = write_dataset_entry(cfg().record_dir, episode, rec);
  send({{"type", "saved"},
        {"v", kWireVersion},
        {"episode_id", episode.id},
        {"path", dir.string()},
        {"n_states", rec.states.size()},
        {"path_length", path_length(rec.trajectory())}});
}

void Connection::on_discard() {
  {
    std::lock_guard lock(session_->mu);
    session_->discarded = true;
    session_->recording = false;
    session_->discard_reason = "operator";
  }
  event("discarded", {{"reason", "operator"}});
}

void Connection::run_bridge_episode(const Episode& episode, const json& msg) {
  AssistantConfig assistant = cfg().assistant;
  if (msg.contains("assistant")) assistant.level = assist_level_from_name(msg["assistant"].get<std::string>());
  const uint64_t seed = msg.value("seed", uint64_t{0});
  send({{"type", "episode_start"}, {"v", kWireVersion}, {"episode", episode}});
  ChannelPolicy policy(ch_, net::Millis(cfg().bridge_timeout_ms), cfg().harness.max_waypoints);
  const EpisodeResult result =
      run_episode(srv_.store_->scene_for(episode), episode, policy, assistant, cfg().harness, seed);
  send({{"type", "episode_result"}, {"v", kWireVersion}, {"result", result}});
}

Server::Server(ServerConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.bind.empty()) {
    const char* env = std::getenv("UAVNAV_BIND");
    cfg_.bind = env && *env ? env : "127.0.0.1:0";
  }
  if (cfg_.manifest) store_ = load_store(*cfg_.manifest);
  listener_ = std::make_unique<net::Listener>(net::Endpoint::parse(cfg_.bind));
  accept_thread_ = std::thread([this] { accept_loop(); });
}

Server::~Server() {
  stop();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::list<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void Server::run() {
  std::unique_lock lock(mu_);
  stopped_cv_.wait(lock, [this] { return stopping_.load(); });
}

void Server::stop() {
  std::lock_guard lock(mu_);
  if (stopping_.exchange(true)) return;
  for (net::FrameChannel* ch : live_channels_) ch->close();
  stopped_cv_.notify_all();
}

void Server::accept_loop() {
  while (!stopping_) {
    auto sock = listener_->accept(net::Millis(100));
    if (!sock) continue;
    std::lock_guard lock(mu_);
    if (stopping_) break;
    workers_.emplace_back([this, s = std::make_shared<net::Socket>(std::move(*sock))]() mutable {
      try {
        serve_connection(net::accept_channel(std::move(*s), net::Millis(5000)));
      } catch (const Error&) {
      }
    });
  }
}

void Server::serve_connection(std::shared_ptr<net::FrameChannel> channel) {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    live_channels_.push_back(channel.get());
  }
  {
    Connection conn(*this, channel);
    try {
      conn.run();
    } catch (const std::exception&) {
    }
  }
  std::lock_guard lock(mu_);
  live_channels_.remove(channel.get());
}

}  // namespace uavnav
