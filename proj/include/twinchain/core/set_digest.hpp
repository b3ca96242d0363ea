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

#include "twinchain/core/bytes.hpp"
#include "twinchain/core/sha256.hpp"

namespace twinchain {

// Order-independent multiset digest (sum of element hashes mod 2^256).
// Supports O(1) insert/erase so state roots never need a full rescan.
class SetDigest {
 public:
  void insert(const Hash256& element) { add(sha256(element.view())); }
  void erase(const Hash256& element) { sub(sha256(element.view())); }

  [[nodiscard]] Hash256 value() const { return sum_; }

  friend bool operator==(const SetDigest&, const SetDigest&) = default;

 private:
  void add(const Hash256& h) {
    unsigned carry = 0;
    for (int i = 31; i >= 0; --i) {
      unsigned v = sum_.bytes[i] + h.bytes[i] + carry;
      sum_.bytes[i] = static_cast<std::uint8_t>(v);
      carry = v >> 8;
    }
  }
  void sub(const Hash256& h) {
    int borrow = 0;
    for (int i = 31; i >= 0; --i) {
      int v = int{sum_.bytes[i]} - int{h.bytes[i]} - borrow;
      borrow = v < 0 ? 1 : 0;
      sum_.bytes[i] = static_cast<std::uint8_t>(v + (borrow << 8));
    }
  }

  Hash256 sum_{};
};

}  // namespace twinchain
