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

#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "twinchain/core/clock.hpp"
#include "twinchain/gateway/chain_client.hpp"
#include "twinchain/gateway/credential.hpp"
#include "twinchain/gateway/message.hpp"
#include "twinchain/gateway/transport.hpp"
#include "twinchain/gateway/view.hpp"
#include "twinchain/sensors/sensor.hpp"

namespace twinchain::gateway {

struct TwinOptions {
  std::int64_t cache_ttl{10};  // clock seconds before the config is refetched
  std::int64_t replay_window{60};
};

struct Response {
  int status{200};
  std::string content_type{"application/json"};
  std::string body;
  std::optional<contracts::DenyReason> deny;
};

inline nlohmann::json config_to_json(const DigitalTwinConfig& c) {
  return {{"twin_id", c.twin_id},
          {"twin_settlor", c.twin_settlor.hex()},
          {"twin_trustee", c.twin_trustee.hex()},
          {"streaming_start", c.streaming_start},
          {"streaming_end", c.streaming_end},
          {"streaming_view",
           {{"streaming_period", c.streaming_view.streaming_period},
            {"view_format", contracts::to_string(c.streaming_view.view_format)}}}};
}

inline DigitalTwinConfig config_from_json(const nlohmann::json& j) {
  DigitalTwinConfig c;
  j.at("twin_id").get_to(c.twin_id);
  c.twin_settlor = Address::from_hex(j.at("twin_settlor").get<std::string>());
  c.twin_trustee = Address::from_hex(j.at("twin_trustee").get<std::string>());
  j.at("streaming_start").get_to(c.streaming_start);
  j.at("streaming_end").get_to(c.streaming_end);
  const auto& v = j.at("streaming_view");
  v.at("streaming_period").get_to(c.streaming_view.streaming_period);
  c.streaming_view.view_format = contracts::view_format_from_string(v.value("view_format", "json"));
  return c;
}

struct PeerQuery {
  std::string requester;  // requesting twin id
  TrusteeCredential credential;  // signed by the requester's settlor for the target twin
  std::optional<std::int64_t> from;
  std::optional<std::int64_t> to;

  [[nodiscard]] Bytes encode() const {
    Writer w;
    w.str(requester);
    credential.write(w);
    w.u8(from ? 1 : 0).i64(from.value_or(0)).u8(to ? 1 : 0).i64(to.value_or(0));
    return std::move(w).take();
  }
  static PeerQuery decode(ByteView data) {
    Reader r{data};
    PeerQuery q;
    q.requester = r.str();
    q.credential = TrusteeCredential::read(r);
    auto has_from = r.u8();
    auto from = r.i64();
    auto has_to = r.u8();
    auto to = r.i64();
    r.expect_done();
    if (has_from) q.from = from;
    if (has_to) q.to = to;
    return q;
  }
};

// The runtime of one digital twin: config from the chain, samples from its
// bound resource, views for trustees and peers.
class TwinService {
 public:
  TwinService(std::string twin_id, std::shared_ptr<ChainEndpoint> chain,
              std::shared_ptr<const sensors::VirtualResource> resource, const Clock& clock, TwinOptions options = {})
      : twin_id_{std::move(twin_id)},
        chain_{std::move(chain)},
        resource_{std::move(resource)},
        clock_{&clock},
        options_{options},
        verifier_{options.replay_window} {}

  [[nodiscard]] const std::string& twin_id() const { return twin_id_; }

  // First chain fetch. Throws UnknownTwin, MismatchedTwin or ChainUnreachable.
  void start() {
    auto cfg = fetch();
    std::lock_guard lock{mu_};
    cached_ = std::move(cfg);
    fetched_at_ = clock_->now();
  }

  [[nodiscard]] bool started() const {
    std::lock_guard lock{mu_};
    return cached_.has_value();
  }

  [[nodiscard]] std::uint64_t chain_fetches() const {
    std::lock_guard lock{mu_};
    return fetches_;
  }

  // Cached config; past the TTL one caller refetches and the others wait for it.
  DigitalTwinConfig config() {
    std::unique_lock lock{mu_};
    if (!cached_) throw GatewayError{GatewayErrc::kNotStarted, twin_id_};
    if (clock_->now() - fetched_at_ < options_.cache_ttl) return *cached_;
    if (inflight_.valid()) {
      auto pending = inflight_;
      lock.unlock();
      return pending.get();
    }
    std::promise<DigitalTwinConfig> promise;
    inflight_ = promise.get_future().share();
    auto pending = inflight_;
    lock.unlock();
    try {
      auto cfg = fetch();
      lock.lock();
      cached_ = cfg;
      fetched_at_ = clock_->now();
      inflight_ = {};
      lock.unlock();
      promise.set_value(cfg);
    } catch (...) {
      lock.lock();
      inflight_ = {};
      lock.unlock();
      promise.set_exception(std::current_exception());
    }
    return pending.get();
  }

  Response third_party(const TrusteeCredential& cred, std::optional<std::int64_t> from,
                       std::optional<std::int64_t> to) {
    if (from && to && *from > *to) return error(400, GatewayErrc::kEmptyWindow);
    Address who;
    try {
      who = verifier_.verify(cred, twin_id_, clock_->now());
      (void)config();
    } catch (const GatewayError& e) {
      return error(e.code() == GatewayErrc::kBadCredential ? 401 : 503, e.code());
    }
    contracts::AccessDecision decision;
    try {
      decision = chain_->validate_access(who, twin_id_, clock_->now());
    } catch (const GatewayError& e) {
      return error(503, e.code());
    }
    if (const auto* deny = std::get_if<contracts::Deny>(&decision)) {
      Response r{403, "application/json", nlohmann::json{{"twin_id", twin_id_}, {"denied", to_string(deny->reason)}}.dump(),
                 deny->reason};
      return r;
    }
    const auto& granted = std::get<contracts::Grant>(decision).config;
    return render(granted, from, to);
  }

  // Settlor-authenticated copy of the cached config.
  Response talk_to_bc(const TrusteeCredential& cred) {
    try {
      auto who = verifier_.verify(cred, twin_id_, clock_->now());
      auto cfg = config();
      if (who != cfg.twin_settlor) return error(403, GatewayErrc::kUnauthorized);
      return {200, "application/json", config_to_json(cfg).dump(), std::nullopt};
    } catch (const GatewayError& e) {
      return error(e.code() == GatewayErrc::kBadCredential ? 401 : 503, e.code());
    }
  }

  // Peers sharing this twin's settlor, or whose settlor is the trustee of
  // this twin's active trust, receive this twin's own view.
  TwinMessage talk_to_dt(const TwinMessage& msg) {
    if (msg.path != kTalkToDtPath) return msg.reply(MessageCode::kNotFound, {});
    if (msg.code != MessageCode::kGet) return msg.reply(MessageCode::kBadRequest, {});
    PeerQuery q;
    try {
      q = PeerQuery::decode(msg.payload);
    } catch (const DecodeError&) {
      return msg.reply(MessageCode::kBadRequest, {});
    }
    if (q.from && q.to && *q.from > *q.to) return msg.reply(MessageCode::kBadRequest, {});
    try {
      auto who = verifier_.verify(q.credential, twin_id_, clock_->now());
      auto requester = chain_->twin_config(q.requester);
      auto own = config();
      if (!requester || requester->twin_settlor != who) return msg.reply(MessageCode::kUnauthorized, {});
      bool allowed = requester->twin_settlor == own.twin_settlor;
      if (!allowed) {
        auto t = chain_->trust(twin_id_);
        allowed = t && t->t_trustee == requester->twin_settlor;
      }
      if (!allowed) return msg.reply(MessageCode::kUnauthorized, {});
      auto r = render(own, q.from, q.to);
      return msg.reply(MessageCode::kContent, Bytes{r.body.begin(), r.body.end()});
    } catch (const GatewayError&) {
      return msg.reply(MessageCode::kUnauthorized, {});
    }
  }

 private:
  DigitalTwinConfig fetch() {
    auto cfg = chain_->twin_config(twin_id_);
    if (!cfg) throw GatewayError{GatewayErrc::kUnknownTwin, twin_id_};
    if (cfg->twin_id != twin_id_) throw GatewayError{GatewayErrc::kMismatchedTwin, cfg->twin_id};
    std::lock_guard lock{mu_};
    ++fetches_;
    return *cfg;
  }

  // Window is clamped to the config window and to the present.
  Response render(const DigitalTwinConfig& cfg, std::optional<std::int64_t> from, std::optional<std::int64_t> to) {
    Window w{std::max(from.value_or(cfg.streaming_start), cfg.streaming_start),
             std::min({to.value_or(cfg.streaming_end), cfg.streaming_end, clock_->now()})};
    DataViewPayload p{twin_id_, cfg.streaming_view.view_format, cfg.streaming_view.streaming_period, w, {}};
    if (w.start <= w.end) {
      p.samples = filter_samples(resource_->read_window(w.start, w.end), cfg.streaming_view.streaming_period, w,
                                 cfg.streaming_start);
    }
    const bool xml = p.format == contracts::ViewFormat::kXml;
    return {200, xml ? "application/xml" : "application/json", render_payload(p), std::nullopt};
  }

  Response error(int status, GatewayErrc code) const {
    return {status, "application/json",
            nlohmann::json{{"twin_id", twin_id_}, {"error", to_string(code)}}.dump(), std::nullopt};
  }

  std::string twin_id_;
  std::shared_ptr<ChainEndpoint> chain_;
  std::shared_ptr<const sensors::VirtualResource> resource_;
  const Clock* clock_;
  TwinOptions options_;
  CredentialVerifier verifier_;

  mutable std::mutex mu_;
  std::optional<DigitalTwinConfig> cached_;
  std::int64_t fetched_at_{0};
  std::uint64_t fetches_{0};
  std::shared_future<DigitalTwinConfig> inflight_;
};

// Asks `peer` for its own view on behalf of `requester`, whose settlor holds `settlor_key`.
inline std::string request_peer_view(TwinClient& client, const std::string& peer, const std::string& requester,
                                     const std::string& target, const ledger::KeyPair& settlor_key,
                                     std::uint64_t nonce, std::int64_t now,
                                     std::optional<std::int64_t> from = std::nullopt,
                                     std::optional<std::int64_t> to = std::nullopt) {
  PeerQuery q{requester, make_credential(settlor_key, target, nonce, now), from, to};
  auto reply = client.request(peer, MessageCode::kGet, std::string{kTalkToDtPath}, q.encode());
  if (reply.code == MessageCode::kUnauthorized) throw GatewayError{GatewayErrc::kUnauthorized, target};
  if (reply.code != MessageCode::kContent) throw GatewayError{GatewayErrc::kBadView, target};
  return {reply.payload.begin(), reply.payload.end()};
}

// A composite view is each twin's own rendering, one per line.
inline std::string compose_views(const std::vector<std::string>& views) {
  std::string out;
  for (const auto& v : views) {
    out += v;
    if (!v.ends_with('\n')) out += '\n';
  }
  return out;
}

}  // namespace twinchain::gateway
