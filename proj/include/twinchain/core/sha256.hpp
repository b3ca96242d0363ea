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

#include <sodium.h>

#include <stdexcept>

#include "twinchain/core/bytes.hpp"

namespace twinchain {

inline void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error{"libsodium initialisation failed"};
    return true;
  }();
  (void)ready;
}

// Incremental SHA-256; the single hash primitive for blocks, tx ids and addresses.
class Sha256 {
 public:
  Sha256() {
    ensure_sodium();
    crypto_hash_sha256_init(&state_);
  }

  Sha256& update(ByteView data) {
    crypto_hash_sha256_update(&state_, data.data(), data.size());
    return *this;
  }
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Sha256& update(const Hash256& h) { return update(h.view()); }

  Hash256 finish() {
    Hash256 out;
    crypto_hash_sha256_final(&state_, out.bytes.data());
    return out;
  }

 private:
  crypto_hash_sha256_state state_{};
};

inline Hash256 sha256(ByteView data) {
  ensure_sodium();
  Hash256 out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

inline Hash256 sha256(std::string_view s) { return sha256(as_bytes(s)); }

}  // namespace twinchain
