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

#include <vector>

#include "twinchain/core/codec.hpp"
#include "twinchain/core/sha256.hpp"
#include "twinchain/ledger/transaction.hpp"

namespace twinchain::ledger {

struct BlockHeader {
  Hash256 parent;
  std::uint64_t height{0};
  std::int64_t timestamp{0};
  std::uint32_t difficulty{0};  // required leading zero bits
  Hash256 tx_root;
  Hash256 state_root;
  std::uint64_t gas_used{0};
  std::uint64_t nonce{0};  // last field: mining rewrites only the trailing eight bytes

  [[nodiscard]] Bytes encode() const {
    Writer w;
    w.u8(kVersion).hash(parent).u64(height).i64(timestamp).u32(difficulty).hash(tx_root).hash(state_root).u64(gas_used).u64(
        nonce);
    return std::move(w).take();
  }

  static BlockHeader read(Reader& r) {
    if (r.u8() != kVersion) throw DecodeError{"unsupported header version"};
    BlockHeader h;
    h.parent = r.hash();
    h.height = r.u64();
    h.timestamp = r.i64();
    h.difficulty = r.u32();
    h.tx_root = r.hash();
    h.state_root = r.hash();
    h.gas_used = r.u64();
    h.nonce = r.u64();
    return h;
  }

  [[nodiscard]] Hash256 hash() const { return sha256(encode()); }

  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;

  static constexpr std::uint8_t kVersion = 1;
};

// Binary Merkle root over transaction ids; an odd node is paired with itself.
inline Hash256 merkle_root(std::vector<Hash256> level) {
  if (level.empty()) return sha256(std::string_view{"twinchain-empty-tx-root"});
  while (level.size() > 1) {
    std::vector<Hash256> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      const auto& right = i + 1 < level.size() ? level[i + 1] : level[i];
      next.push_back(Sha256{}.update(level[i]).update(right).finish());
    }
    level = std::move(next);
  }
  return level.front();
}

inline Hash256 tx_root_of(const std::vector<Transaction>& txs) {
  std::vector<Hash256> ids;
  ids.reserve(txs.size());
  for (const auto& tx : txs) ids.push_back(tx.id());
  return merkle_root(std::move(ids));
}

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;

  [[nodiscard]] Hash256 hash() const { return header.hash(); }
  [[nodiscard]] std::uint64_t height() const { return header.height; }

  [[nodiscard]] Bytes encode() const {
    Writer w;
    w.raw(header.encode()).u32(static_cast<std::uint32_t>(transactions.size()));
    for (const auto& tx : transactions) w.bytes(tx.encode());
    return std::move(w).take();
  }

  static Block decode(ByteView data) {
    Reader r{data};
    Block b;
    b.header = BlockHeader::read(r);
    auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      auto raw = r.bytes();
      b.transactions.push_back(Transaction::decode(raw));
    }
    r.expect_done();
    return b;
  }

  friend bool operator==(const Block&, const Block&) = default;
};

}  // namespace twinchain::ledger
