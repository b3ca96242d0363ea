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

#include <array>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "twinchain/core/codec.hpp"
#include "twinchain/core/sha256.hpp"
#include "twinchain/ledger/error.hpp"

namespace twinchain::ledger {

inline constexpr std::size_t kMaxTopics = 3;

// Indexed (searchable) log fields. Holding more than kMaxTopics is unrepresentable.
class Topics {
 public:
  Topics() = default;
  Topics(std::initializer_list<Hash256> topics) {
    for (const auto& t : topics) push_back(t);
  }
  explicit Topics(std::span<const Hash256> topics) {
    for (const auto& t : topics) push_back(t);
  }

  void push_back(const Hash256& t) {
    if (size_ == kMaxTopics) throw LedgerError{LedgerErrc::kTooManyTopics};
    items_[size_++] = t;
  }

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }
  const Hash256& operator[](std::size_t i) const { return items_[i]; }
  [[nodiscard]] const Hash256* begin() const { return items_.data(); }
  [[nodiscard]] const Hash256* end() const { return items_.data() + size_; }

  friend bool operator==(const Topics& a, const Topics& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<Hash256, kMaxTopics> items_{};
  std::size_t size_{0};
};

struct LogEntry {
  Address emitter;
  Topics topics;
  Bytes data;  // non-indexed payload, not searchable

  void write(Writer& w) const {
    w.address(emitter).u8(static_cast<std::uint8_t>(topics.size()));
    for (const auto& t : topics) w.hash(t);
    w.bytes(data);
  }

  static LogEntry read(Reader& r) {
    LogEntry e;
    e.emitter = r.address();
    auto n = r.u8();
    if (n > kMaxTopics) throw LedgerError{LedgerErrc::kTooManyTopics};
    for (int i = 0; i < n; ++i) e.topics.push_back(r.hash());
    e.data = r.bytes();
    return e;
  }

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

// Folds several searchable values into one topic when more than three are
// needed. Query with the same combination to find the entry again.
inline Hash256 combine_topics(std::span<const Hash256> values) {
  Sha256 h;
  h.update(std::string_view{"twinchain-composite-topic"});
  for (const auto& v : values) h.update(v);
  return h.finish();
}

inline Hash256 combine_topics(std::initializer_list<Hash256> values) {
  return combine_topics(std::span<const Hash256>{values.begin(), values.size()});
}

// Positional topic filter; nullopt entries are wildcards.
class LogFilter {
 public:
  LogFilter() = default;
  LogFilter(std::optional<Address> emitter, std::vector<std::optional<Hash256>> topics)
      : emitter_{emitter}, topics_{std::move(topics)} {
    if (topics_.size() > kMaxTopics) throw LedgerError{LedgerErrc::kTooManyTopics, "filter"};
  }

  LogFilter& up_to_height(std::uint64_t h) {
    max_height_ = h;
    return *this;
  }

  [[nodiscard]] std::optional<std::uint64_t> max_height() const { return max_height_; }

  [[nodiscard]] bool matches(const LogEntry& e) const {
    if (emitter_ && e.emitter != *emitter_) return false;
    if (topics_.size() > e.topics.size()) {
      // a wildcard may sit past the end of a shorter entry; a concrete value may not
      for (std::size_t i = e.topics.size(); i < topics_.size(); ++i) {
        if (topics_[i]) return false;
      }
    }
    for (std::size_t i = 0; i < topics_.size() && i < e.topics.size(); ++i) {
      if (topics_[i] && *topics_[i] != e.topics[i]) return false;
    }
    return true;
  }

 private:
  std::optional<Address> emitter_;
  std::vector<std::optional<Hash256>> topics_;
  std::optional<std::uint64_t> max_height_;
};

}  // namespace twinchain::ledger
