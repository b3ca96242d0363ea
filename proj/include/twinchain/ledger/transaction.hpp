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

#include "twinchain/core/codec.hpp"
#include "twinchain/core/sha256.hpp"
#include "twinchain/ledger/keys.hpp"

namespace twinchain::ledger {

// A signed contract call. `target` is absent for registry deployment.
// `signature` carries the sender's public key followed by the Ed25519 signature.
struct Transaction {
  Address sender;
  std::optional<Address> target;
  Bytes payload;
  std::uint64_t nonce{0};
  Bytes signature;

  [[nodiscard]] Bytes signing_bytes() const {
    Writer w;
    write_body(w);
    return std::move(w).take();
  }

  [[nodiscard]] Bytes encode() const {
    Writer w;
    write_body(w);
    w.bytes(signature);
    return std::move(w).take();
  }

  static Transaction decode(ByteView data) {
    Reader r{data};
    auto tx = read(r);
    r.expect_done();
    return tx;
  }

  static Transaction read(Reader& r) {
    if (r.u8() != kVersion) throw DecodeError{"unsupported transaction version"};
    Transaction tx;
    tx.sender = r.address();
    auto has_target = r.u8();
    if (has_target > 1) throw DecodeError{"bad target flag"};
    if (has_target == 1) tx.target = r.address();
    tx.payload = r.bytes();
    tx.nonce = r.u64();
    tx.signature = r.bytes();
    return tx;
  }

  [[nodiscard]] Hash256 id() const { return sha256(encode()); }

  friend bool operator==(const Transaction&, const Transaction&) = default;

 private:
  static constexpr std::uint8_t kVersion = 1;

  void write_body(Writer& w) const {
    w.u8(kVersion).address(sender).u8(target ? 1 : 0);
    if (target) w.address(*target);
    w.bytes(payload).u64(nonce);
  }
};

inline Transaction make_transaction(const KeyPair& key, std::optional<Address> target, Bytes payload,
                                    std::uint64_t nonce) {
  Transaction tx{key.address(), target, std::move(payload), nonce, {}};
  auto sig = key.sign(tx.signing_bytes());
  auto pk = key.public_key();
  tx.signature.assign(pk.begin(), pk.end());
  tx.signature.insert(tx.signature.end(), sig.begin(), sig.end());
  return tx;
}

inline bool signature_valid(const Transaction& tx) {
  if (tx.signature.size() != kPublicKeySize + kSignatureSize) return false;
  ByteView sig{tx.signature};
  auto pk = sig.first(kPublicKeySize);
  if (address_of(pk) != tx.sender) return false;
  auto body = tx.signing_bytes();
  return verify_signature(pk, body, sig.subspan(kPublicKeySize));
}

}  // namespace twinchain::ledger
