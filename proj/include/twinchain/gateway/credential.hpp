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

#include <charconv>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "twinchain/core/codec.hpp"
#include "twinchain/gateway/error.hpp"
#include "twinchain/ledger/keys.hpp"

namespace twinchain::gateway {

inline constexpr std::string_view kKeyHeader = "X-Twin-Key";
inline constexpr std::string_view kNonceHeader = "X-Twin-Nonce";
inline constexpr std::string_view kTimestampHeader = "X-Twin-Timestamp";
inline constexpr std::string_view kSignatureHeader = "X-Twin-Signature";

// A signed claim to act as `address()` towards one twin at one moment.
struct TrusteeCredential {
  Bytes public_key;
  std::uint64_t nonce{0};
  std::int64_t timestamp{0};
  Bytes signature;

  [[nodiscard]] Address address() const { return ledger::address_of(public_key); }

  void write(Writer& w) const { w.bytes(public_key).u64(nonce).i64(timestamp).bytes(signature); }
  static TrusteeCredential read(Reader& r) {
    TrusteeCredential c;
    c.public_key = r.bytes();
    c.nonce = r.u64();
    c.timestamp = r.i64();
    c.signature = r.bytes();
    return c;
  }
};

inline Bytes credential_message(std::string_view twin_id, std::uint64_t nonce, std::int64_t timestamp) {
  Writer w;
  w.str("twinchain-credential").str(twin_id).u64(nonce).i64(timestamp);
  return std::move(w).take();
}

inline TrusteeCredential make_credential(const ledger::KeyPair& key, std::string_view twin_id, std::uint64_t nonce,
                                         std::int64_t timestamp) {
  auto pk = key.public_key();
  return {Bytes{pk.begin(), pk.end()}, nonce, timestamp, key.sign(credential_message(twin_id, nonce, timestamp))};
}

// Signature check, a ±window freshness bound, and a nonce cache covering the window.
class CredentialVerifier {
 public:
  explicit CredentialVerifier(std::int64_t window = 60) : window_{window} {}

  Address verify(const TrusteeCredential& c, std::string_view twin_id, std::int64_t now) {
    if (!ledger::verify_signature(c.public_key, credential_message(twin_id, c.nonce, c.timestamp), c.signature)) {
      throw GatewayError{GatewayErrc::kBadCredential, "signature"};
    }
    if (c.timestamp < now - window_ || c.timestamp > now + window_) {
      throw GatewayError{GatewayErrc::kBadCredential, "stale timestamp"};
    }
    auto who = c.address();
    std::lock_guard lock{mu_};
    for (auto it = seen_.begin(); it != seen_.end();) {
      it = it->second < now - window_ ? seen_.erase(it) : std::next(it);
    }
    if (!seen_.emplace(std::pair{who, c.nonce}, c.timestamp).second) {
      throw GatewayError{GatewayErrc::kBadCredential, "replayed nonce"};
    }
    return who;
  }

 private:
  std::int64_t window_;
  std::mutex mu_;
  std::map<std::pair<Address, std::uint64_t>, std::int64_t> seen_;
};

template <class Headers>
void put_credential_headers(Headers& h, const TrusteeCredential& c) {
  h.emplace(std::string{kKeyHeader}, to_hex(c.public_key));
  h.emplace(std::string{kNonceHeader}, std::to_string(c.nonce));
  h.emplace(std::string{kTimestampHeader}, std::to_string(c.timestamp));
  h.emplace(std::string{kSignatureHeader}, to_hex(c.signature));
}

// `get(name)` returns the header value or an empty string.
template <class Get>
TrusteeCredential credential_from_headers(Get&& get) {
  auto field = [&](std::string_view name) {
    std::string v = get(std::string{name});
    if (v.empty()) throw GatewayError{GatewayErrc::kBadCredential, "missing " + std::string{name}};
    return v;
  };
  auto number = [&](std::string_view name, auto& out) {
    auto v = field(name);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      throw GatewayError{GatewayErrc::kBadCredential, "malformed " + std::string{name}};
    }
  };
  TrusteeCredential c;
  try {
    c.public_key = from_hex(field(kKeyHeader));
    c.signature = from_hex(field(kSignatureHeader));
  } catch (const std::invalid_argument& e) {
    throw GatewayError{GatewayErrc::kBadCredential, e.what()};
  }
  number(kNonceHeader, c.nonce);
  number(kTimestampHeader, c.timestamp);
  return c;
}

}  // namespace twinchain::gateway
