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

#include "twinchain/core/bytes.hpp"

namespace twinchain {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical binary encoding: fixed-width big-endian integers, raw 32-byte
// hashes, and u32 length-prefixed variable fields.
class Writer {
 public:
  Writer& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  Writer& u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  Writer& u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  Writer& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Writer& hash(const Hash256& h) {
    out_.insert(out_.end(), h.bytes.begin(), h.bytes.end());
    return *this;
  }
  Writer& address(const Address& a) { return hash(a.digest); }
  Writer& bytes(ByteView data) {
    u32(static_cast<std::uint32_t>(data.size()));
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
  }
  Writer& str(std::string_view s) { return bytes(as_bytes(s)); }
  Writer& raw(ByteView data) {
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
  }

  [[nodiscard]] const Bytes& data() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_{data} {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (auto b : s) v = (v << 8) | b;
    return v;
  }
  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (auto b : s) v = (v << 8) | b;
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  Hash256 hash() { return Hash256::from_view(take(32)); }
  Address address() { return Address{hash()}; }
  Bytes bytes() {
    auto n = u32();
    auto s = take(n);
    return Bytes(s.begin(), s.end());
  }
  std::string str() {
    auto n = u32();
    auto s = take(n);
    return std::string(s.begin(), s.end());
  }

  [[nodiscard]] bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw DecodeError{"trailing bytes"};
  }

 private:
  ByteView take(std::size_t n) {
    if (data_.size() - pos_ < n) throw DecodeError{"truncated input"};
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  ByteView data_;
  std::size_t pos_{0};
};

}  // namespace twinchain
