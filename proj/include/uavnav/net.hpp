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
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace uavnav::net {

using Millis = std::chrono::milliseconds;

inline constexpr std::size_t kMaxFrameBytes = 64u << 20;

struct Endpoint {
  std::string host = "127.0.0.1";
  uint16_t port = 0;

  // "host:port" or ":port".
  static Endpoint parse(std::string_view text);
  std::string str() const { return host + ":" + std::to_string(port); }
};

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close();
  void shutdown();

  void send_all(std::string_view bytes);
  // Appends whatever arrives within the timeout. Returns false on timeout;
  // throws Error(Network) when the peer closed.
  bool read_some(std::string& buffer, Millis timeout);

 private:
  int fd_ = -1;
};

Socket connect_tcp(const Endpoint& ep, Millis timeout);

class Listener {
 public:
  explicit Listener(const Endpoint& ep);
  uint16_t port() const { return port_; }
  std::optional<Socket> accept(Millis timeout);

 private:
  Socket sock_;
  uint16_t port_ = 0;
};

// Message-oriented duplex channel. send() may be called from any thread;
// receive() only from the owning thread.
class FrameChannel {
 public:
  virtual ~FrameChannel() = default;
  virtual void send(std::string_view payload) = 0;
  // nullopt on timeout; throws Error(Network) when the connection closed.
  virtual std::optional<std::string> receive(Millis timeout) = 0;
  virtual void close() = 0;
  virtual bool is_websocket() const { return false; }
};

// 4-byte big-endian length followed by a UTF-8 document.
class LengthPrefixedChannel final : public FrameChannel {
 public:
  explicit LengthPrefixedChannel(Socket sock, std::string pending = {});
  void send(std::string_view payload) override;
  std::optional<std::string> receive(Millis timeout) override;
  void close() override { sock_.shutdown(); }

 private:
  Socket sock_;
  std::string buffer_;
  std::mutex send_mu_;
};

// RFC 6455 message channel. Client channels mask outgoing frames.
class WebSocketChannel final : public FrameChannel {
 public:
  WebSocketChannel(Socket sock, bool client, std::string pending = {});
  void send(std::string_view payload) override;
  std::optional<std::string> receive(Millis timeout) override;
  void close() override;
  bool is_websocket() const override { return true; }

 private:
  void send_frame(uint8_t opcode, std::string_view payload);

  Socket sock_;
  bool client_;
  std::string buffer_;
  std::string partial_;
  std::mutex send_mu_;
  uint32_t mask_state_ = 0x9E3779B9u;
};

std::string encode_length_prefixed(std::string_view payload);

// Server side: sniffs the first bytes and performs the HTTP upgrade when the
// peer speaks WebSocket, otherwise falls back to length-prefixed frames.
std::unique_ptr<FrameChannel> accept_channel(Socket sock, Millis handshake_timeout);

std::unique_ptr<FrameChannel> connect_length_prefixed(const Endpoint& ep, Millis timeout);
std::unique_ptr<FrameChannel> connect_websocket(const Endpoint& ep, const std::string& path, Millis timeout);

std::string websocket_accept_key(std::string_view client_key);

}  // namespace uavnav::net
