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
#include <string>

#include "twinchain/core/codec.hpp"

namespace twinchain::gateway {

// Codes use the class.detail split of the constrained application protocol.
enum class MessageCode : std::uint8_t {
  kGet = 0x01,
  kPost = 0x02,
  kContent = 0x45,       // 2.05
  kBadRequest = 0x80,    // 4.00
  kUnauthorized = 0x81,  // 4.01
  kNotFound = 0x84,      // 4.04
};

enum class MessageType : std::uint8_t { kConfirmable = 0, kAcknowledgement = 2 };

inline constexpr std::size_t kMaxTokenBytes = 8;
inline constexpr std::string_view kTalkToDtPath = "/coap_api/talk_to_dt";

// Wire layout: ver(2) type(2) token-length(4) | code | message id (16, BE) |
// token | u16 path length | path | 0xff | payload.
struct TwinMessage {
  MessageType type{MessageType::kConfirmable};
  MessageCode code{MessageCode::kGet};
  std::uint16_t message_id{0};
  Bytes token;
  std::string path;
  Bytes payload;

  [[nodiscard]] Bytes encode() const {
    if (token.size() > kMaxTokenBytes) throw DecodeError{"token longer than 8 bytes"};
    if (path.size() > 0xffff) throw DecodeError{"path too long"};
    Writer w;
    w.u8(static_cast<std::uint8_t>(0x40 | (static_cast<std::uint8_t>(type) << 4) | token.size()));
    w.u8(static_cast<std::uint8_t>(code));
    w.u8(static_cast<std::uint8_t>(message_id >> 8)).u8(static_cast<std::uint8_t>(message_id));
    w.raw(token);
    w.u8(static_cast<std::uint8_t>(path.size() >> 8)).u8(static_cast<std::uint8_t>(path.size()));
    w.raw(as_bytes(path));
    w.u8(0xff).raw(payload);
    return std::move(w).take();
  }

  static TwinMessage decode(ByteView data) {
    if (data.size() < 7) throw DecodeError{"short message"};
    TwinMessage m;
    const auto first = data[0];
    if ((first >> 6) != 1) throw DecodeError{"unsupported version"};
    const auto type = (first >> 4) & 0x3;
    if (type != 0 && type != 2) throw DecodeError{"unsupported message type"};
    m.type = static_cast<MessageType>(type);
    const std::size_t tkl = first & 0x0f;
    if (tkl > kMaxTokenBytes) throw DecodeError{"token longer than 8 bytes"};
    m.code = static_cast<MessageCode>(data[1]);
    m.message_id = static_cast<std::uint16_t>((data[2] << 8) | data[3]);
    std::size_t pos = 4;
    auto need = [&](std::size_t n) {
      if (data.size() - pos < n) throw DecodeError{"truncated message"};
    };
    need(tkl);
    m.token.assign(data.begin() + static_cast<std::ptrdiff_t>(pos), data.begin() + static_cast<std::ptrdiff_t>(pos + tkl));
    pos += tkl;
    need(2);
    const std::size_t path_len = (static_cast<std::size_t>(data[pos]) << 8) | data[pos + 1];
    pos += 2;
    need(path_len + 1);
    m.path.assign(reinterpret_cast<const char*>(data.data() + pos), path_len);
    pos += path_len;
    if (data[pos++] != 0xff) throw DecodeError{"missing payload marker"};
    m.payload.assign(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end());
    return m;
  }

  [[nodiscard]] TwinMessage reply(MessageCode c, Bytes body) const {
    return {MessageType::kAcknowledgement, c, message_id, token, path, std::move(body)};
  }

  friend bool operator==(const TwinMessage&, const TwinMessage&) = default;
};

}  // namespace twinchain::gateway
