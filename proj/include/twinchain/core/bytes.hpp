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

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twinchain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

inline Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw std::invalid_argument{"odd-length hex string"};
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw std::invalid_argument{"invalid hex digit"};
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

// 256-bit value used for block hashes, tx ids, log topics and storage words.
struct Hash256 {
  std::array<std::uint8_t, 32> bytes{};

  static constexpr std::size_t size() { return 32; }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
  }
  [[nodiscard]] ByteView view() const { return {bytes.data(), bytes.size()}; }
  [[nodiscard]] std::string hex() const { return to_hex(view()); }

  static Hash256 from_hex(std::string_view hex) {
    auto raw = twinchain::from_hex(hex);
    if (raw.size() != 32) throw std::invalid_argument{"expected 32-byte hex value"};
    Hash256 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
  }

  static Hash256 from_view(ByteView raw) {
    if (raw.size() != 32) throw std::invalid_argument{"expected 32 bytes"};
    Hash256 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
  }

  friend auto operator<=>(const Hash256&, const Hash256&) = default;
};

// Account identity: the digest of a public key or of a contract-creation tuple.
struct Address {
  Hash256 digest;

  [[nodiscard]] std::string hex() const { return digest.hex(); }
  static Address from_hex(std::string_view hex) { return Address{Hash256::from_hex(hex)}; }

  friend auto operator<=>(const Address&, const Address&) = default;
};

// Number of leading zero bits, the proof-of-work predicate's measure.
inline unsigned leading_zero_bits(const Hash256& h) {
  unsigned bits = 0;
  for (auto b : h.bytes) {
    if (b == 0) {
      bits += 8;
      continue;
    }
    for (int i = 7; i >= 0 && ((b >> i) & 1) == 0; --i) ++bits;
    break;
  }
  return bits;
}

// Word helpers: big-endian integers and short text packed into one 32-byte word.
inline Hash256 word_from_u64(std::uint64_t v) {
  Hash256 w;
  for (int i = 0; i < 8; ++i) w.bytes[31 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  return w;
}

inline std::uint64_t word_to_u64(const Hash256& w) {
  std::uint64_t v = 0;
  for (int i = 24; i < 32; ++i) v = (v << 8) | w.bytes[i];
  return v;
}

}  // namespace twinchain

template <>
struct std::hash<twinchain::Hash256> {
  std::size_t operator()(const twinchain::Hash256& h) const noexcept {
    std::size_t v;
    std::memcpy(&v, h.bytes.data(), sizeof v);
    return v;
  }
};

template <>
struct std::hash<twinchain::Address> {
  std::size_t operator()(const twinchain::Address& a) const noexcept {
    return std::hash<twinchain::Hash256>{}(a.digest);
  }
};
