/*
   Copyright 2026 The Twinchain Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "twinchain/gateway/error.hpp"
#include "twinchain/gateway/message.hpp"

namespace twinchain::gateway {

using MessageHandler = std::function<TwinMessage(const TwinMessage&)>;

// One datagram exchange: send a request, wait up to `timeout` for a reply.
class DatagramChannel {
 public:
  virtual ~DatagramChannel() = default;
  virtual std::optional<Bytes> round_trip(const std::string& peer, ByteView request,
                                          std::chrono::milliseconds timeout) = 0;
};

struct RetryPolicy {
  unsigned retransmits{3};
  std::chrono::milliseconds initial_timeout{100};
  unsigned backoff_factor{2};
};

// Confirmable request with exponential backoff. Replies must echo the
// message id and token; anything else counts as lost.
class TwinClient {
 public:
  explicit TwinClient(DatagramChannel& channel, RetryPolicy policy = {})
      : channel_{&channel}, policy_{policy}, next_id_{static_cast<std::uint16_t>(std::random_device{}())} {}

  TwinMessage request(const std::string& peer, MessageCode code, std::string path, Bytes payload) {
    TwinMessage req{MessageType::kConfirmable, code, next_id_.fetch_add(1), make_token(), std::move(path),
                    std::move(payload)};
    const auto wire = req.encode();
    auto timeout = policy_.initial_timeout;
    for (unsigned attempt = 0; attempt <= policy_.retransmits; ++attempt) {
      if (auto raw = channel_->round_trip(peer, wire, timeout)) {
        try {
          auto reply = TwinMessage::decode(*raw);
          if (reply.type == MessageType::kAcknowledgement && reply.message_id == req.message_id &&
              reply.token == req.token) {
            return reply;
          }
        } catch (const DecodeError&) {
        }
      }
      timeout *= policy_.backoff_factor;
    }
    throw GatewayError{GatewayErrc::kPeerUnreachable, peer};
  }

 private:
  Bytes make_token() {
    std::lock_guard lock{mu_};
    Bytes token(4);
    for (auto& b : token) b = static_cast<std::uint8_t>(rng_());
    return token;
  }

  DatagramChannel* channel_;
  RetryPolicy policy_;
  std::atomic<std::uint16_t> next_id_;
  std::mutex mu_;
  std::mt19937 rng_{std::random_device{}()};
};

// In-process datagram network for tests and the scripted demo.
class LoopbackBus : public DatagramChannel {
 public:
  void attach(const std::string& name, MessageHandler handler) {
    std::lock_guard lock{mu_};
    handlers_[name] = std::move(handler);
  }
  void detach(const std::string& name) {
    std::lock_guard lock{mu_};
    handlers_.erase(name);
  }
  void set_offline(const std::string& name, bool offline) {
    std::lock_guard lock{mu_};
    if (offline) {
      offline_.insert(name);
    } else {
      offline_.erase(name);
    }
  }
  [[nodiscard]] std::size_t attempts(const std::string& name) const {
    std::lock_guard lock{mu_};
    auto it = attempts_.find(name);
    return it == attempts_.end() ? 0 : it->second;
  }

  std::optional<Bytes> round_trip(const std::string& peer, ByteView request,
                                  std::chrono::milliseconds timeout) override {
    MessageHandler handler;
    {
      std::lock_guard lock{mu_};
      ++attempts_[peer];
      auto it = handlers_.find(peer);
      if (it != handlers_.end() && !offline_.contains(peer)) handler = it->second;
    }
    if (!handler) {
      std::this_thread::sleep_for(timeout);
      return std::nullopt;
    }
    try {
      return handler(TwinMessage::decode(request)).encode();
    } catch (const DecodeError&) {
      return std::nullopt;
    }
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, MessageHandler> handlers_;
  std::set<std::string> offline_;
  std::map<std::string, std::size_t> attempts_;
};

namespace detail {

inline sockaddr_in parse_peer(const std::string& peer) {
  auto colon = peer.rfind(':');
  if (colon == std::string::npos) throw GatewayError{GatewayErrc::kPeerUnreachable, "expected host:port, got " + peer};
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(std::stoi(peer.substr(colon + 1))));
  auto host = peer.substr(0, colon);
  if (host == "localhost") host = "127.0.0.1";
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw GatewayError{GatewayErrc::kPeerUnreachable, "bad address " + peer};
  }
  return addr;
}

class Socket {
 public:
  Socket() : fd_{::socket(AF_INET, SOCK_DGRAM, 0)} {
    if (fd_ < 0) throw GatewayError{GatewayErrc::kPortUnavailable, "socket"};
  }
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  [[nodiscard]] int fd() const { return fd_; }

 private:
  int fd_;
};

inline bool wait_readable(int fd, std::chrono::milliseconds timeout) {
  pollfd p{fd, POLLIN, 0};
  return ::poll(&p, 1, static_cast<int>(timeout.count())) > 0 && (p.revents & POLLIN);
}

}  // namespace detail

class UdpChannel : public DatagramChannel {
 public:
  std::optional<Bytes> round_trip(const std::string& peer, ByteView request,
                                  std::chrono::milliseconds timeout) override {
    auto addr = detail::parse_peer(peer);
    std::lock_guard lock{mu_};
    ::sendto(sock_.fd(), request.data(), request.size(), 0, reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    Bytes buf(65'536);
    while (true) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0 || !detail::wait_readable(sock_.fd(), left)) return std::nullopt;
      auto n = ::recv(sock_.fd(), buf.data(), buf.size(), 0);
      if (n > 0) {
        buf.resize(static_cast<std::size_t>(n));
        return buf;
      }
    }
  }

 private:
  std::mutex mu_;
  detail::Socket sock_;
};

// Serves one handler on a UDP port. Retransmitted requests get the cached reply.
class UdpServer {
 public:
  UdpServer(std::uint16_t port, MessageHandler handler) : handler_{std::move(handler)} {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::bind(sock_.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
      throw GatewayError{GatewayErrc::kPortUnavailable, "udp " + std::to_string(port)};
    }
    socklen_t len = sizeof addr;
    ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    worker_ = std::jthread{[this](std::stop_token stop) { serve(stop); }};
  }

  [[nodiscard]] std::uint16_t port() const { return port_; }

 private:
  void serve(std::stop_token stop) {
    Bytes buf(65'536);
    while (!stop.stop_requested()) {
      if (!detail::wait_readable(sock_.fd(), std::chrono::milliseconds{50})) continue;
      sockaddr_in from{};
      socklen_t len = sizeof from;
      auto n = ::recvfrom(sock_.fd(), buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&from), &len);
      if (n <= 0) continue;
      Bytes reply;
      try {
        auto req = TwinMessage::decode(ByteView{buf.data(), static_cast<std::size_t>(n)});
        const auto key = std::tuple{from.sin_addr.s_addr, from.sin_port, req.message_id};
        if (auto it = replies_.find(key); it != replies_.end()) {
          reply = it->second;
        } else {
          reply = handler_(req).encode();
          replies_.emplace(key, reply);
          order_.push_back(key);
          if (order_.size() > 256) {
            replies_.erase(order_.front());
            order_.pop_front();
          }
        }
      } catch (const DecodeError&) {
        continue;
      }
      ::sendto(sock_.fd(), reply.data(), reply.size(), 0, reinterpret_cast<const sockaddr*>(&from), len);
    }
  }

  using Key = std::tuple<std::uint32_t, std::uint16_t, std::uint16_t>;

  MessageHandler handler_;
  detail::Socket sock_;
  std::uint16_t port_{0};
  std::map<Key, Bytes> replies_;
  std::deque<Key> order_;
  std::jthread worker_;
};

}  // namespace twinchain::gateway
