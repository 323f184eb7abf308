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

#include "uavnav/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>

#include <openssl/sha.h>

#include "uavnav/error.hpp"
#include "uavnav/serialization.hpp"

namespace uavnav::net {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::Network, what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host.empty() ? "0.0.0.0" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res)
    throw Error(ErrorCode::Network, "cannot resolve host '" + host + "'");
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  require(colon != std::string_view::npos, "endpoint must be host:port, got '" + std::string(text) + "'");
  Endpoint ep;
  ep.host = std::string(text.substr(0, colon));
  if (ep.host.empty()) ep.host = "127.0.0.1";
  const std::string port(text.substr(colon + 1));
  char* end = nullptr;
  const long p = std::strtol(port.c_str(), &end, 10);
  require(!port.empty() && *end == '\0' && p >= 0 && p <= 65535, "invalid port in '" + std::string(text) + "'");
  ep.port = static_cast<uint16_t>(p);
  return ep;
}

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = std::exchange(o.fd_, -1);
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::send_all(std::string_view bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

bool Socket::read_some(std::string& buffer, Millis timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  const int r = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (r < 0) {
    if (errno == EINTR) return false;
    fail("poll");
  }
  if (r == 0) return false;
  char chunk[65536];
  const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
  if (n < 0) {
    if (errno == EINTR || errno == EAGAIN) return false;
    fail("recv");
  }
  if (n == 0) throw Error(ErrorCode::Network, "connection closed by peer");
  buffer.append(chunk, static_cast<std::size_t>(n));
  return true;
}

Socket connect_tcp(const Endpoint& ep, Millis timeout) {
  const sockaddr_in addr = resolve(ep);
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) fail("socket");
  const int flags = ::fcntl(s.fd(), F_GETFL, 0);
  ::fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);
  if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) < 0) {
    if (errno != EINPROGRESS) fail("connect " + ep.str());
    pollfd pfd{s.fd(), POLLOUT, 0};
    if (::poll(&pfd, 1, static_cast<int>(timeout.count())) <= 0)
      throw Error(ErrorCode::Network, "connect " + ep.str() + ": timed out");
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      errno = err;
      fail("connect " + ep.str());
    }
  }
  ::fcntl(s.fd(), F_SETFL, flags);
  int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return s;
}

Listener::Listener(const Endpoint& ep) {
  const sockaddr_in addr = resolve(ep);
  sock_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!sock_.valid()) fail("socket");
  int one = 1;
  ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(sock_.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) < 0) fail("bind " + ep.str());
  if (::listen(sock_.fd(), 16) < 0) fail("listen");
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

std::optional<Socket> Listener::accept(Millis timeout) {
  pollfd pfd{sock_.fd(), POLLIN, 0};
  const int r = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (r <= 0) return std::nullopt;
  const int fd = ::accept(sock_.fd(), nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return Socket(fd);
}

std::string encode_length_prefixed(std::string_view payload) {
  require(payload.size() <= kMaxFrameBytes, "frame too large");
  const auto n = static_cast<uint32_t>(payload.size());
  std::string out;
  out.reserve(4 + payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out.append(payload);
  return out;
}

LengthPrefixedChannel::LengthPrefixedChannel(Socket sock, std::string pending)
    : sock_(std::move(sock)), buffer_(std::move(pending)) {}

void LengthPrefixedChannel::send(std::string_view payload) {
  const std::string frame = encode_length_prefixed(payload);
  std::lock_guard lock(send_mu_);
  sock_.send_all(frame);
}

std::optional<std::string> LengthPrefixedChannel::receive(Millis timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    if (buffer_.size() >= 4) {
      const auto* b = reinterpret_cast<const unsigned char*>(buffer_.data());
      const uint32_t n = (uint32_t{b[0]} << 24) | (uint32_t{b[1]} << 16) | (uint32_t{b[2]} << 8) | uint32_t{b[3]};
      if (n > kMaxFrameBytes) throw Error(ErrorCode::Network, "incoming frame exceeds size limit");
      if (buffer_.size() >= 4 + std::size_t{n}) {
        std::string payload = buffer_.substr(4, n);
        buffer_.erase(0, 4 + std::size_t{n});
        return payload;
      }
    }
    const auto left = std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    sock_.read_some(buffer_, left);
  }
}

WebSocketChannel::WebSocketChannel(Socket sock, bool client, std::string pending)
    : sock_(std::move(sock)), client_(client), buffer_(std::move(pending)) {}

void WebSocketChannel::send_frame(uint8_t opcode, std::string_view payload) {
  std::string frame;
  frame.push_back(static_cast<char>(0x80 | opcode));
  const uint8_t mask_bit = client_ ? 0x80 : 0x00;
  const std::size_t n = payload.size();
  if (n < 126) {
    frame.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    frame.push_back(static_cast<char>(mask_bit | 126));
    frame.push_back(static_cast<char>((n >> 8) & 0xFF));
    frame.push_back(static_cast<char>(n & 0xFF));
  } else {
    frame.push_back(static_cast<char>(mask_bit | 127));
    for (int i = 7; i >= 0; --i) frame.push_back(static_cast<char>((static_cast<uint64_t>(n) >> (8 * i)) & 0xFF));
  }
  std::lock_guard lock(send_mu_);
  if (client_) {
    mask_state_ = mask_state_ * 1664525u + 1013904223u;
    const uint8_t key[4] = {static_cast<uint8_t>(mask_state_ >> 24), static_cast<uint8_t>(mask_state_ >> 16),
                            static_cast<uint8_t>(mask_state_ >> 8), static_cast<uint8_t>(mask_state_)};
    frame.append(reinterpret_cast<const char*>(key), 4);
    for (std::size_t i = 0; i < n; ++i) frame.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  } else {
    frame.append(payload);
  }
  sock_.send_all(frame);
}

void WebSocketChannel::send(std::string_view payload) { send_frame(0x1, payload); }

void WebSocketChannel::close() {
  try {
    send_frame(0x8, {});
  } catch (const Error&) {
  }
  sock_.shutdown();
}

std::optional<std::string> WebSocketChannel::receive(Millis timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    // Parse as many complete frames as the buffer holds.
    while (buffer_.size() >= 2) {
      const auto* b = reinterpret_cast<const unsigned char*>(buffer_.data());
      const bool fin = b[0] & 0x80;
      const uint8_t opcode = b[0] & 0x0F;
      const bool masked = b[1] & 0x80;
      uint64_t len = b[1] & 0x7F;
      std::size_t pos = 2;
      if (len == 126) {
        if (buffer_.size() < 4) break;
        len = (uint64_t{b[2]} << 8) | b[3];
        pos = 4;
      } else if (len == 127) {
        if (buffer_.size() < 10) break;
        len = 0;
        for (int i = 0; i < 8; ++i) len = (len << 8) | b[2 + i];
        pos = 10;
      }
      if (len > kMaxFrameBytes) throw Error(ErrorCode::Network, "incoming websocket frame exceeds size limit");
      const std::size_t need = pos + (masked ? 4 : 0) + static_cast<std::size_t>(len);
      if (buffer_.size() < need) break;
      std::string payload = buffer_.substr(pos + (masked ? 4 : 0), static_cast<std::size_t>(len));
      if (masked)
        for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<char>(payload[i] ^ b[pos + i % 4]);
      buffer_.erase(0, need);
      switch (opcode) {
        case 0x8:
          throw Error(ErrorCode::Network, "websocket closed by peer");
        case 0x9:
          send_frame(0xA, payload);
          continue;
        case 0xA:
          continue;
        default:
          partial_ += payload;
          if (fin) return std::exchange(partial_, {});
      }
    }
    const auto left = std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    sock_.read_some(buffer_, left);
  }
}

std::string websocket_accept_key(std::string_view client_key) {
  const std::string input = std::string(client_key) + "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest);
  return base64_encode(std::span<const uint8_t>(digest, SHA_DIGEST_LENGTH));
}

namespace {

std::string header_value(const std::string& request, std::string_view name) {
  std::string lower = request;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  std::string key = "\r\n" + std::string(name) + ":";
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto at = lower.find(key);
  if (at == std::string::npos) return {};
  auto begin = at + key.size();
  auto end = request.find("\r\n", begin);
  std::string v = request.substr(begin, end - begin);
  v.erase(0, v.find_first_not_of(" \t"));
  v.erase(v.find_last_not_of(" \t") + 1);
  return v;
}

}  // namespace

std::unique_ptr<FrameChannel> accept_channel(Socket sock, Millis handshake_timeout) {
  std::string buf;
  const auto deadline = std::chrono::steady_clock::now() + handshake_timeout;
  auto remaining = [&] {
    return std::max(Millis(0), std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now()));
  };
  while (buf.size() < 4) {
    if (remaining().count() == 0) throw Error(ErrorCode::Network, "handshake timed out");
    sock.read_some(buf, remaining());
  }
  if (buf.compare(0, 4, "GET ") != 0) return std::make_unique<LengthPrefixedChannel>(std::move(sock), std::move(buf));

  std::size_t end;
  while ((end = buf.find("\r\n\r\n")) == std::string::npos) {
    if (remaining().count() == 0 || buf.size() > 16384) throw Error(ErrorCode::Network, "bad websocket handshake");
    sock.read_some(buf, remaining());
  }
  const std::string request = buf.substr(0, end + 2);
  const std::string key = header_value(request, "Sec-WebSocket-Key");
  if (key.empty()) {
    sock.send_all("HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
    throw Error(ErrorCode::Network, "HTTP request without websocket upgrade");
  }
  sock.send_all("HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                "Sec-WebSocket-Accept: " +
                websocket_accept_key(key) + "\r\n\r\n");
  return std::make_unique<WebSocketChannel>(std::move(sock), /*client=*/false, buf.substr(end + 4));
}

std::unique_ptr<FrameChannel> connect_length_prefixed(const Endpoint& ep, Millis timeout) {
  return std::make_unique<LengthPrefixedChannel>(connect_tcp(ep, timeout));
}

std::unique_ptr<FrameChannel> connect_websocket(const Endpoint& ep, const std::string& path, Millis timeout) {
  Socket sock = connect_tcp(ep, timeout);
  const std::string key = "dWF2bmF2LWNsaWVudC1rZXk=";
  sock.send_all("GET " + path + " HTTP/1.1\r\nHost: " + ep.str() +
                "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + key +
                "\r\nSec-WebSocket-Version: 13\r\n\r\n");
  std::string buf;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::size_t end;
  while ((end = buf.find("\r\n\r\n")) == std::string::npos) {
    const auto left = std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw Error(ErrorCode::Network, "websocket handshake timed out");
    sock.read_some(buf, left);
  }
  const std::string response = buf.substr(0, end + 2);
  if (response.rfind("HTTP/1.1 101", 0) != 0 ||
      header_value(response, "Sec-WebSocket-Accept") != websocket_accept_key(key))
    throw Error(ErrorCode::Network, "websocket upgrade rejected");
  return std::make_unique<WebSocketChannel>(std::move(sock), /*client=*/true, buf.substr(end + 4));
}

}  // namespace uavnav::net
