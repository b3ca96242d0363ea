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

#include <span>
#include <vector>

#include "twinchain/core/cow.hpp"
#include "twinchain/core/set_digest.hpp"
#include "twinchain/ledger/block.hpp"
#include "twinchain/ledger/error.hpp"
#include "twinchain/ledger/genesis.hpp"
#include "twinchain/ledger/receipt.hpp"

namespace twinchain::ledger {

struct IndexedLog {
  std::uint64_t height{0};
  std::uint32_t tx_index{0};
  std::uint32_t log_index{0};
  LogEntry entry;
};

// Executed state after a given block: contract machine, account nonces,
// receipts and the log index. Cheap to copy; snapshots share storage.
template <StateMachine M>
class ChainState {
 public:
  explicit ChainState(M machine, const Block& genesis)
      : machine_{std::move(machine)}, height_{0}, block_hash_{genesis.hash()} {}

  [[nodiscard]] const M& machine() const { return machine_; }
  [[nodiscard]] std::uint64_t height() const { return height_; }
  [[nodiscard]] const Hash256& block_hash() const { return block_hash_; }

  [[nodiscard]] Hash256 state_root() const {
    return Sha256{}.update(machine_.state_root()).update(accounts_.value()).finish();
  }

  // Smallest nonce the sender may use next.
  [[nodiscard]] std::uint64_t next_nonce(const Address& a) const {
    const auto* n = next_nonce_.find(a);
    return n ? *n : 0;
  }

  [[nodiscard]] std::optional<Receipt> receipt(const Hash256& tx_id) const {
    const auto* pos = receipt_index_.find(tx_id);
    if (!pos) return std::nullopt;
    return receipts_[*pos];
  }

  [[nodiscard]] std::size_t receipt_count() const { return receipts_.size(); }
  [[nodiscard]] std::size_t log_count() const { return logs_.size(); }

  [[nodiscard]] std::vector<LogEntry> query_logs(const LogFilter& filter) const {
    std::vector<LogEntry> out;
    logs_.for_each([&](const IndexedLog& l) {
      if (filter.max_height() && l.height > *filter.max_height()) return;
      if (filter.matches(l.entry)) out.push_back(l.entry);
    });
    return out;
  }

  // Executes one transaction whose sender and nonce were already admitted.
  Receipt apply(const Transaction& tx, const Hash256& tx_id, std::uint64_t height, std::int64_t timestamp,
                std::uint32_t tx_index) {
    auto outcome = machine_.execute(tx, ExecContext{height, timestamp, tx_id});
    set_next_nonce(tx.sender, tx.nonce + 1);

    Receipt r{tx_id, outcome.status, outcome.gas_used, std::move(outcome.logs), std::move(outcome.output),
              std::move(outcome.revert_reason), height};
    if (!r.ok()) r.logs.clear();
    for (std::uint32_t i = 0; i < r.logs.size(); ++i) logs_.push_back(IndexedLog{height, tx_index, i, r.logs[i]});
    receipt_index_.insert_or_assign(tx_id, receipts_.size());
    receipts_.push_back(r);
    return r;
  }

  void seal(std::uint64_t height, const Hash256& block_hash) {
    height_ = height;
    block_hash_ = block_hash;
  }

 private:
  void set_next_nonce(const Address& a, std::uint64_t next) {
    if (const auto* old = next_nonce_.find(a)) accounts_.erase(account_leaf(a, *old));
    next_nonce_.insert_or_assign(a, next);
    accounts_.insert(account_leaf(a, next));
  }

  static Hash256 account_leaf(const Address& a, std::uint64_t next) {
    Writer w;
    w.address(a).u64(next);
    return sha256(w.data());
  }

  M machine_;
  CowMap<Address, std::uint64_t> next_nonce_;
  SetDigest accounts_;
  CowVector<Receipt> receipts_;
  CowMap<Hash256, std::uint64_t> receipt_index_;
  CowVector<IndexedLog> logs_;
  std::uint64_t height_;
  Hash256 block_hash_;
};

// Re-executes a block's transactions against `state` (the parent's state)
// and checks every stateful rule, including the committed state root.
template <StateMachine M>
BlockVerdict execute_block(ChainState<M>& state, const Block& block, const GenesisConfig& genesis) {
  std::uint64_t gas = 0;
  std::uint32_t index = 0;
  for (const auto& tx : block.transactions) {
    if (!genesis.permits(tx.sender)) return BlockVerdict::kUnknownSender;
    if (tx.nonce < state.next_nonce(tx.sender)) return BlockVerdict::kBadNonce;
    auto r = state.apply(tx, tx.id(), block.height(), block.header.timestamp, index++);
    gas += r.gas_used;
    if (gas > genesis.block_gas_limit) return BlockVerdict::kGasLimitExceeded;
  }
  if (gas != block.header.gas_used) return BlockVerdict::kBadStateRoot;
  if (state.state_root() != block.header.state_root) return BlockVerdict::kBadStateRoot;
  state.seal(block.height(), block.hash());
  return BlockVerdict::kAccepted;
}

// Builds an unmined block on top of `parent`: pending transactions are taken
// in submission order until the block gas limit would be exceeded. `state`
// enters as the parent's state and leaves as the new block's state; only the
// nonce remains to be found.
template <StateMachine M, class Pending>
Block assemble_block(ChainState<M>& state, const Block& parent, const Pending& pending, std::int64_t timestamp,
                     const GenesisConfig& genesis) {
  Block block;
  block.header.parent = parent.hash();
  block.header.height = parent.height() + 1;
  block.header.timestamp = std::max(timestamp, parent.header.timestamp);
  block.header.difficulty = genesis.difficulty;

  std::uint64_t gas = 0;
  for (const Transaction& tx : pending) {
    if (!genesis.permits(tx.sender) || tx.nonce < state.next_nonce(tx.sender)) continue;
    auto before = state;
    auto id = tx.id();
    auto r = state.apply(tx, id, block.height(), block.header.timestamp,
                         static_cast<std::uint32_t>(block.transactions.size()));
    if (gas + r.gas_used > genesis.block_gas_limit) {
      state = std::move(before);
      // a transaction larger than a whole block can never be included
      if (block.transactions.empty()) continue;
      break;
    }
    gas += r.gas_used;
    block.transactions.push_back(tx);
  }
  block.header.gas_used = gas;
  block.header.tx_root = tx_root_of(block.transactions);
  block.header.state_root = state.state_root();
  return block;
}

}  // namespace twinchain::ledger
