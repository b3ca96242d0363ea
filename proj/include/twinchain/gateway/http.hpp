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

#include <sys/socket.h>

#include <charconv>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "httplib.h"
#include "twinchain/gateway/twin.hpp"

namespace twinchain::gateway {

inline constexpr std::string_view kThirdPartyPath = "/http_api/talk_to_third_party";
inline constexpr std::string_view kBlockchainPath = "/http_api/talk_to_bc";

struct InstancePorts {
  std::uint16_t http{0};  // 0 picks a free port
  std::uint16_t dt{0};
};

// A running twin: HTTP for trustees and the settlor, a datagram endpoint for peers.
// Nothing else is routed, so clients never reach the sensor.
class TwinInstance {
 public:
  TwinInstance(std::shared_ptr<TwinService> service, std::string host = "127.0.0.1")
      : service_{std::move(service)}, host_{std::move(host)} {}

  ~TwinInstance() { stop(); }
  TwinInstance(const TwinInstance&) = delete;
  TwinInstance& operator=(const TwinInstance&) = delete;

  // Fetches the config first; no port is opened for an unknown twin.
  void start(InstancePorts ports = {}) {
    service_->start();
    server_ = std::make_unique<httplib::Server>();
    server_->set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    routes();
    if (ports.http == 0) {
      const int bound = server_->bind_to_any_port(host_);
      if (bound < 0) throw GatewayError{GatewayErrc::kPortUnavailable, "http"};
      http_port_ = static_cast<std::uint16_t>(bound);
    } else {
      if (!server_->bind_to_port(host_, ports.http)) {
        throw GatewayError{GatewayErrc::kPortUnavailable, "http " + std::to_string(ports.http)};
      }
      http_port_ = ports.http;
    }
    dt_ = std::make_unique<UdpServer>(ports.dt, [svc = service_](const TwinMessage& m) { return svc->talk_to_dt(m); });
    listener_ = std::thread{[this] { server_->listen_after_bind(); }};
    server_->wait_until_ready();
  }

  void stop() {
    if (server_) server_->stop();
    if (listener_.joinable()) listener_.join();
    dt_.reset();
  }

  [[nodiscard]] std::uint16_t http_port() const { return http_port_; }
  [[nodiscard]] std::uint16_t dt_port() const { return dt_ ? dt_->port() : 0; }
  [[nodiscard]] TwinService& service() { return *service_; }

 private:
  static std::optional<std::int64_t> query_int(const httplib::Request& req, const char* name, bool& bad) {
    if (!req.has_param(name)) return std::nullopt;
    auto v = req.get_param_value(name);
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad = true;
    return out;
  }

  static void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  }

  void routes() {
    auto credential = [](const httplib::Request& req) {
      return credential_from_headers([&](const std::string& name) { return req.get_header_value(name); });
    };
    server_->Get(std::string{kThirdPartyPath}, [this, credential](const httplib::Request& req, httplib::Response& res) {
      bool bad = false;
      auto from = query_int(req, "from", bad);
      auto to = query_int(req, "to", bad);
      if (bad) {
        res.status = 400;
        res.set_content(R"({"error":"BadRequest"})", "application/json");
        return;
      }
      try {
        send(res, service_->third_party(credential(req), from, to));
      } catch (const GatewayError& e) {
        res.status = 401;
        res.set_content(nlohmann::json{{"error", to_string(e.code())}}.dump(), "application/json");
      }
    });
    server_->Get(std::string{kBlockchainPath}, [this, credential](const httplib::Request& req, httplib::Response& res) {
      try {
        send(res, service_->talk_to_bc(credential(req)));
      } catch (const GatewayError& e) {
        res.status = 401;
        res.set_content(nlohmann::json{{"error", to_string(e.code())}}.dump(), "application/json");
      }
    });
  }

  std::shared_ptr<TwinService> service_;
  std::string host_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<UdpServer> dt_;
  std::thread listener_;
  std::uint16_t http_port_{0};
};

}  // namespace twinchain::gateway
