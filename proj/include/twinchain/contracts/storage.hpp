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

#include <optional>

#include "twinchain/core/bytes.hpp"
#include "twinchain/core/cow.hpp"
#include "twinchain/core/set_digest.hpp"
#include "twinchain/core/sha256.hpp"

namespace twinchain::contracts {

enum class SlotWrite : std::uint8_t { kFresh, kUpdate, kUnchanged };

// Contract word storage. The root is an incremental multiset digest over
// (key, value) pairs, so it never depends on write order.
class SlotStorage {
 public:
  [[nodiscard]] std::optional<Hash256> read(const Hash256& key) const {
    if (const auto* v = slots_.find(key)) return *v;
    return std::nullopt;
  }

  SlotWrite write(const Hash256& key, const Hash256& value) {
    const auto* old = slots_.find(key);
    if (old && *old == value) return SlotWrite::kUnchanged;
    const bool fresh = old == nullptr;
    if (old) digest_.erase(leaf(key, *old));
    slots_.insert_or_assign(key, value);
    digest_.insert(leaf(key, value));
    return fresh ? SlotWrite::kFresh : SlotWrite::kUpdate;
  }

  bool clear(const Hash256& key) {
    const auto* old = slots_.find(key);
    if (!old) return false;
    digest_.erase(leaf(key, *old));
    slots_.erase(key);
    return true;
  }

  [[nodiscard]] std::size_t size() const { return slots_.size(); }
  [[nodiscard]] Hash256 root() const { return digest_.value(); }

 private:
  static Hash256 leaf(const Hash256& key, const Hash256& value) {
    Sha256 h;
    h.update(key);
    h.update(value);
    return h.finish();
  }

  CowMap<Hash256, Hash256> slots_;
  SetDigest digest_;
};

}  // namespace twinchain::contracts
