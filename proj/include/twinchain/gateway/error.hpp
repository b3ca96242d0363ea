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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twinchain::gateway {

enum class GatewayErrc : std::uint8_t {
  kUnknownTwin,
  kMismatchedTwin,
  kChainUnreachable,
  kBadCredential,
  kPortUnavailable,
  kPeerUnreachable,
  kUnauthorized,
  kEmptyWindow,
  kBadView,
  kNotStarted,
};

constexpr std::string_view to_string(GatewayErrc e) {
  switch (e) {
    case GatewayErrc::kUnknownTwin: return "UnknownTwin";
    case GatewayErrc::kMismatchedTwin: return "MismatchedTwin";
    case GatewayErrc::kChainUnreachable: return "ChainUnreachable";
    case GatewayErrc::kBadCredential: return "BadCredential";
    case GatewayErrc::kPortUnavailable: return "PortUnavailable";
    case GatewayErrc::kPeerUnreachable: return "PeerUnreachable";
    case GatewayErrc::kUnauthorized: return "Unauthorized";
    case GatewayErrc::kEmptyWindow: return "EmptyWindow";
    case GatewayErrc::kBadView: return "BadView";
    case GatewayErrc::kNotStarted: return "NotStarted";
  }
  return "Unknown";
}

class GatewayError : public std::runtime_error {
 public:
  GatewayError(GatewayErrc code, const std::string& detail = {})
      : std::runtime_error{detail.empty() ? std::string{to_string(code)} : std::string{to_string(code)} + ": " + detail},
        code_{code} {}
  [[nodiscard]] GatewayErrc code() const noexcept { return code_; }

 private:
  GatewayErrc code_;
};

}  // namespace twinchain::gateway
