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

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "uavnav/error.hpp"
#include "uavnav/net.hpp"
#include "uavnav/serialization.hpp"
#include "uavnav/wire.hpp"

namespace uavnav::testing {

// Scripted client for the session server.
constexpr net::Millis kWait{5000};

class Client {
 public:
  explicit Client(uint16_t port, bool websocket = false)
      : ch_(websocket ? net::connect_websocket({"127.0.0.1", port}, "/", kWait)
                      : net::connect_length_prefixed({"127.0.0.1", port}, kWait)) {}

  void send(const json& j) { ch_->send(j.dump()); }

  json recv(net::Millis timeout = kWait) {
    const auto text = ch_->receive(timeout);
    if (!text) throw Error(ErrorCode::Network, "test client: nothing received");
    return json::parse(*text);
  }

  // Skips everything until a message satisfies `pred`.
  json until(const std::function<bool(const json&)>& pred, net::Millis timeout = kWait) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      const auto left = std::chrono::duration_cast<net::Millis>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw Error(ErrorCode::Network, "test client: expected message never arrived");
      json j = recv(left);
      if (pred(j)) return j;
    }
  }
  json until_type(const std::string& type) {
    return until([&](const json& j) { return j.value("type", "") == type; });
  }
  json until_event(const std::string& name) {
    return until([&](const json& j) { return j.value("type", "") == "event" && j.value("event", "") == name; });
  }
  json until_error() { return until_type("error"); }

  json hello(json extra = json::object()) {
    extra["type"] = "hello";
    if (!extra.contains("v")) extra["v"] = kWireVersion;
    send(extra);
    return until([](const json& j) { return j.value("type", "") == "hello_ack" || j.value("type", "") == "error"; });
  }

  // Lockstep controller with `episode` loaded; returns the first observation.
  json start(const std::string& episode) {
    const json ack = hello({{"clock", "lockstep"}});
    if (ack["type"] != "hello_ack") throw Error(ErrorCode::Network, "test client: hello rejected");
    send({{"type", "episode_request"}, {"episode_id", episode}});
    until_type("episode_start");
    return until_type("obs");
  }

  json tick(int n) {
    send({{"type", "tick"}, {"n", n}});
    return until_type("obs");
  }

  bool closed(net::Millis timeout = net::Millis(2000)) {
    try {
      while (ch_->receive(timeout)) {
      }
      return false;
    } catch (const Error&) {
      return true;
    }
  }

 private:
  std::unique_ptr<net::FrameChannel> ch_;
};

}  // namespace uavnav::testing
