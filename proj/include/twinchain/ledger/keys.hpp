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

#include <array>
#include <string_view>

#include "twinchain/core/bytes.hpp"
#include "twinchain/core/sha256.hpp"

namespace twinchain::ledger {

inline constexpr std::size_t kPublicKeySize = crypto_sign_PUBLICKEYBYTES;
inline constexpr std::size_t kSignatureSize = crypto_sign_BYTES;

inline Address address_of(ByteView public_key) { return Address{sha256(public_key)}; }

inline bool verify_signature(ByteView public_key, ByteView message, ByteView signature) {
  ensure_sodium();
  if (public_key.size() != kPublicKeySize || signature.size() != kSignatureSize) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), public_key.data()) == 0;
}

// Ed25519 signing key. Deterministic when built from a seed.
class KeyPair {
 public:
  static KeyPair from_seed(const Hash256& seed) {
    ensure_sodium();
    KeyPair k;
    crypto_sign_seed_keypair(k.public_.data(), k.secret_.data(), seed.bytes.data());
    return k;
  }

  // Convenience for tests and scenarios: the seed is the hash of a label.
  static KeyPair from_label(std::string_view label) { return from_seed(sha256(label)); }

  static KeyPair generate() {
    ensure_sodium();
    KeyPair k;
    crypto_sign_keypair(k.public_.data(), k.secret_.data());
    return k;
  }

  [[nodiscard]] ByteView public_key() const { return {public_.data(), public_.size()}; }
  [[nodiscard]] Address address() const { return address_of(public_key()); }

  [[nodiscard]] Bytes sign(ByteView message) const {
    Bytes sig(kSignatureSize);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
    return sig;
  }

 private:
  KeyPair() = default;

  std::array<std::uint8_t, kPublicKeySize> public_{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> secret_{};
};

}  // namespace twinchain::ledger
