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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "twinchain/core/bytes.hpp"

namespace twinchain::contracts {

enum class StorageMode : std::uint8_t { kVariables = 0, kLogs = 1 };

constexpr std::string_view to_string(StorageMode m) { return m == StorageMode::kVariables ? "variables" : "logs"; }

inline StorageMode storage_mode_from_string(std::string_view s) {
  if (s == "variables") return StorageMode::kVariables;
  if (s == "logs") return StorageMode::kLogs;
  throw std::invalid_argument{"unknown storage mode: " + std::string{s}};
}

enum class ViewFormat : std::uint8_t { kJson = 0, kXml = 1 };

inline constexpr ViewFormat kDefaultViewFormat = ViewFormat::kJson;

constexpr std::string_view to_string(ViewFormat f) { return f == ViewFormat::kJson ? "json" : "xml"; }

inline ViewFormat view_format_from_string(std::string_view s) {
  if (s == "json") return ViewFormat::kJson;
  if (s == "xml") return ViewFormat::kXml;
  throw std::invalid_argument{"unknown view format: " + std::string{s}};
}

struct DataView {
  std::uint64_t streaming_period{0};  // seconds between provisioned samples
  ViewFormat view_format{kDefaultViewFormat};

  friend bool operator==(const DataView&, const DataView&) = default;
};

struct DigitalTwinConfig {
  std::string twin_id;
  Address twin_settlor;
  Address twin_trustee;
  std::int64_t streaming_start{0};
  std::int64_t streaming_end{0};
  DataView streaming_view;

  friend bool operator==(const DigitalTwinConfig&, const DigitalTwinConfig&) = default;
};

struct TrustStructure {
  std::string twin;
  Address t_settlor;
  Address t_trustee;

  friend bool operator==(const TrustStructure&, const TrustStructure&) = default;
};

enum class DenyReason : std::uint8_t { kNoTrust, kWrongTrustee, kWindowClosed };

constexpr std::string_view to_string(DenyReason r) {
  switch (r) {
    case DenyReason::kNoTrust: return "NoTrust";
    case DenyReason::kWrongTrustee: return "WrongTrustee";
    case DenyReason::kWindowClosed: return "WindowClosed";
  }
  return "Unknown";
}

struct Grant {
  DigitalTwinConfig config;
  friend bool operator==(const Grant&, const Grant&) = default;
};

struct Deny {
  DenyReason reason;
  friend bool operator==(const Deny&, const Deny&) = default;
};

using AccessDecision = std::variant<Grant, Deny>;

inline bool granted(const AccessDecision& d) { return std::holds_alternative<Grant>(d); }

enum class ContractErrc : std::uint8_t {
  kNotSettlor,
  kInvalidWindow,
  kEmptyTwinId,
  kTextTooLong,
  kSettlorIsTrustee,
  kInvalidView,
  kDuplicateTwin,
  kUnknownTwin,
  kDuplicateTrust,
  kNoActiveTrust,
  kIndexOutOfRange,
  kNoContract,
  kBadPayload,
};

constexpr std::string_view to_string(ContractErrc e) {
  switch (e) {
    case ContractErrc::kNotSettlor: return "NotSettlor";
    case ContractErrc::kInvalidWindow: return "InvalidWindow";
    case ContractErrc::kEmptyTwinId: return "EmptyTwinId";
    case ContractErrc::kTextTooLong: return "TextTooLong";
    case ContractErrc::kSettlorIsTrustee: return "SettlorIsTrustee";
    case ContractErrc::kInvalidView: return "InvalidView";
    case ContractErrc::kDuplicateTwin: return "DuplicateTwin";
    case ContractErrc::kUnknownTwin: return "UnknownTwin";
    case ContractErrc::kDuplicateTrust: return "DuplicateTrust";
    case ContractErrc::kNoActiveTrust: return "NoActiveTrust";
    case ContractErrc::kIndexOutOfRange: return "IndexOutOfRange";
    case ContractErrc::kNoContract: return "NoContract";
    case ContractErrc::kBadPayload: return "BadPayload";
  }
  return "Unknown";
}

class ContractError : public std::runtime_error {
 public:
  explicit ContractError(ContractErrc code) : std::runtime_error{std::string{to_string(code)}}, code_{code} {}
  [[nodiscard]] ContractErrc code() const noexcept { return code_; }

 private:
  ContractErrc code_;
};

// Text fields occupy a single 32-byte word.
inline constexpr std::size_t kMaxTextBytes = 31;

inline std::optional<ContractErrc> check_config(const DigitalTwinConfig& c) {
  if (c.twin_id.empty()) return ContractErrc::kEmptyTwinId;
  if (c.twin_id.size() > kMaxTextBytes) return ContractErrc::kTextTooLong;
  if (c.streaming_start > c.streaming_end) return ContractErrc::kInvalidWindow;
  if (c.twin_settlor == c.twin_trustee) return ContractErrc::kSettlorIsTrustee;
  if (c.streaming_view.streaming_period == 0) return ContractErrc::kInvalidView;
  if (c.streaming_view.view_format != ViewFormat::kJson && c.streaming_view.view_format != ViewFormat::kXml) {
    return ContractErrc::kInvalidView;
  }
  return std::nullopt;
}

}  // namespace twinchain::contracts
