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
#include <variant>

#include "twinchain/contracts/types.hpp"
#include "twinchain/core/codec.hpp"

namespace twinchain::contracts {

// Transaction payload: one selector byte, then each argument as a u32
// length-prefixed field. Integers are 8-byte big-endian, addresses 32 bytes,
// enums one byte, text raw UTF-8.
enum class Selector : std::uint8_t {
  kDeploy = 0x01,
  kSetDigitalTwin = 0x10,
  kRegisterTrust = 0x11,
  kTransferProperty = 0x12,
  kRevokeTrust = 0x13,
};

struct DeployCall {
  StorageMode mode{StorageMode::kVariables};
  friend bool operator==(const DeployCall&, const DeployCall&) = default;
};

struct SetDigitalTwinCall {
  DigitalTwinConfig config;
  friend bool operator==(const SetDigitalTwinCall&, const SetDigitalTwinCall&) = default;
};

struct RegisterTrustCall {
  Address trustee;
  std::string twin_id;
  friend bool operator==(const RegisterTrustCall&, const RegisterTrustCall&) = default;
};

struct TransferPropertyCall {
  std::string twin_id;
  Address new_trustee;
  friend bool operator==(const TransferPropertyCall&, const TransferPropertyCall&) = default;
};

struct RevokeTrustCall {
  std::string twin_id;
  friend bool operator==(const RevokeTrustCall&, const RevokeTrustCall&) = default;
};

using Call = std::variant<DeployCall, SetDigitalTwinCall, RegisterTrustCall, TransferPropertyCall, RevokeTrustCall>;

namespace detail {

inline void field_u8(Writer& w, std::uint8_t v) {
  w.u32(1).u8(v);
}
inline void field_u64(Writer& w, std::uint64_t v) {
  w.u32(8).u64(v);
}
inline void field_address(Writer& w, const Address& a) {
  w.u32(32).address(a);
}

inline Reader field(Reader& r, Bytes& holder, std::size_t expected) {
  holder = r.bytes();
  if (expected != 0 && holder.size() != expected) throw DecodeError{"call field has wrong width"};
  return Reader{holder};
}
inline std::uint8_t read_u8(Reader& r) {
  Bytes h;
  return field(r, h, 1).u8();
}
inline std::uint64_t read_u64(Reader& r) {
  Bytes h;
  return field(r, h, 8).u64();
}
inline Address read_address(Reader& r) {
  Bytes h;
  return field(r, h, 32).address();
}

inline StorageMode to_mode(std::uint8_t v) {
  if (v > 1) throw DecodeError{"unknown storage mode"};
  return static_cast<StorageMode>(v);
}
inline ViewFormat to_format(std::uint8_t v) {
  if (v > 1) throw DecodeError{"unknown view format"};
  return static_cast<ViewFormat>(v);
}

}  // namespace detail

inline Bytes encode_call(const Call& call) {
  Writer w;
  struct Visitor {
    Writer& w;
    void operator()(const DeployCall& c) const {
      w.u8(static_cast<std::uint8_t>(Selector::kDeploy));
      detail::field_u8(w, static_cast<std::uint8_t>(c.mode));
    }
    void operator()(const SetDigitalTwinCall& c) const {
      const auto& cfg = c.config;
      w.u8(static_cast<std::uint8_t>(Selector::kSetDigitalTwin));
      w.str(cfg.twin_id);
      detail::field_address(w, cfg.twin_settlor);
      detail::field_address(w, cfg.twin_trustee);
      detail::field_u64(w, static_cast<std::uint64_t>(cfg.streaming_start));
      detail::field_u64(w, static_cast<std::uint64_t>(cfg.streaming_end));
      detail::field_u64(w, cfg.streaming_view.streaming_period);
      detail::field_u8(w, static_cast<std::uint8_t>(cfg.streaming_view.view_format));
    }
    void operator()(const RegisterTrustCall& c) const {
      w.u8(static_cast<std::uint8_t>(Selector::kRegisterTrust));
      detail::field_address(w, c.trustee);
      w.str(c.twin_id);
    }
    void operator()(const TransferPropertyCall& c) const {
      w.u8(static_cast<std::uint8_t>(Selector::kTransferProperty));
      w.str(c.twin_id);
      detail::field_address(w, c.new_trustee);
    }
    void operator()(const RevokeTrustCall& c) const {
      w.u8(static_cast<std::uint8_t>(Selector::kRevokeTrust));
      w.str(c.twin_id);
    }
  };
  std::visit(Visitor{w}, call);
  return std::move(w).take();
}

// Throws DecodeError on unknown selectors, bad widths or trailing bytes.
inline Call decode_call(ByteView payload) {
  Reader r{payload};
  Call out;
  switch (static_cast<Selector>(r.u8())) {
    case Selector::kDeploy:
      out = DeployCall{detail::to_mode(detail::read_u8(r))};
      break;
    case Selector::kSetDigitalTwin: {
      DigitalTwinConfig cfg;
      cfg.twin_id = r.str();
      cfg.twin_settlor = detail::read_address(r);
      cfg.twin_trustee = detail::read_address(r);
      cfg.streaming_start = static_cast<std::int64_t>(detail::read_u64(r));
      cfg.streaming_end = static_cast<std::int64_t>(detail::read_u64(r));
      cfg.streaming_view.streaming_period = detail::read_u64(r);
      cfg.streaming_view.view_format = detail::to_format(detail::read_u8(r));
      out = SetDigitalTwinCall{std::move(cfg)};
      break;
    }
    case Selector::kRegisterTrust: {
      RegisterTrustCall c;
      c.trustee = detail::read_address(r);
      c.twin_id = r.str();
      out = std::move(c);
      break;
    }
    case Selector::kTransferProperty: {
      TransferPropertyCall c;
      c.twin_id = r.str();
      c.new_trustee = detail::read_address(r);
      out = std::move(c);
      break;
    }
    case Selector::kRevokeTrust:
      out = RevokeTrustCall{r.str()};
      break;
    default:
      throw DecodeError{"unknown call selector"};
  }
  r.expect_done();
  return out;
}

}  // namespace twinchain::contracts
