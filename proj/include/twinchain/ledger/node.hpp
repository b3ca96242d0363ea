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

#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "twinchain/ledger/chain_state.hpp"
#include "twinchain/ledger/pow.hpp"
#include "twinchain/ledger/verify.hpp"

namespace twinchain::ledger {

// One ledger replica: block tree with longest-chain fork choice, mempool,
// and executed state for recent canonical heights. All public members are
// thread-safe. A single writer applies blocks; readers take immutable
// snapshots.
template <StateMachine M>
class Node {
 public:
  using State = ChainState<M>;
  using Snapshot = std::shared_ptr<const State>;

  // Replicas sharing a process may share one signature cache.
  explicit Node(GenesisConfig genesis, M machine = M{}, std::size_t retained_states = 64,
                std::shared_ptr<SignatureCache> sig_cache = nullptr)
      : genesis_{std::move(genesis)},
        genesis_block_{genesis_.genesis_block()},
        initial_machine_{std::move(machine)},
        retained_{std::max<std::size_t>(retained_states, genesis_.confirmations + 1)},
        sig_cache_{sig_cache ? std::move(sig_cache) : std::make_shared<SignatureCache>()} {
    auto hash = genesis_block_.hash();
    blocks_.emplace(hash, genesis_block_);
    canonical_.push_back(hash);
    auto st = std::make_shared<const State>(initial_machine_, genesis_block_);
    states_.emplace(0, st);
    genesis_state_ = st;
  }

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  [[nodiscard]] const GenesisConfig& genesis() const { return genesis_; }
  [[nodiscard]] const Block& genesis_block() const { return genesis_block_; }

  // Admits a transaction to the mempool. Throws LedgerError on BadSignature,
  // StaleNonce or UnknownSender.
  Hash256 submit_transaction(const Transaction& tx) {
    auto id = tx.id();
    if (!sig_cache_->check(tx, id)) throw LedgerError{LedgerErrc::kBadSignature};
    if (!genesis_.permits(tx.sender)) throw LedgerError{LedgerErrc::kUnknownSender, tx.sender.hex()};
    std::lock_guard lock{mu_};
    if (tx.nonce < min_pending_nonce(tx.sender)) {
      throw LedgerError{LedgerErrc::kStaleNonce, "nonce " + std::to_string(tx.nonce)};
    }
    pending_next_[tx.sender] = tx.nonce + 1;
    mempool_ids_.insert(id);
    mempool_.push_back(PendingTx{id, tx});
    return id;
  }

  // Builds a block from the mempool on the current tip, searches for its
  // proof of work, and appends it. Returns nullopt if stopped or if the tip
  // moved while mining (a competing block arrived).
  std::optional<Block> mine_next(std::int64_t timestamp, std::stop_token stop = {},
                                 const std::function<void()>& on_assembled = {}) {
    std::shared_ptr<State> state;
    Block block;
    std::uint64_t version;
    {
      std::lock_guard lock{mu_};
      state = std::make_shared<State>(*tip_state());
      version = tip_version_.load();
      block = assemble_block(*state, blocks_.at(canonical_.back()), mempool_view(), timestamp, genesis_);
    }
    if (on_assembled) on_assembled();
    auto found = search_nonce(block.header, [&] { return !stop.stop_requested() && tip_version_.load() == version; });
    if (!found) return std::nullopt;
    block.header.nonce = found->nonce;
    hash_attempts_ += found->attempts;

    std::lock_guard lock{mu_};
    if (tip_version_.load() != version) return std::nullopt;
    auto hash = block.hash();
    state->seal(block.height(), hash);
    blocks_.emplace(hash, block);
    adopt({hash}, {std::move(state)}, canonical_.size() - 1);
    return block;
  }

  // Runs mine_next on a dedicated worker; cancel() or a new tip stops it.
  // Returns once the worker has fixed its parent block.
  MiningJob<Block> start_mining(std::int64_t timestamp) {
    auto ready = std::make_shared<std::promise<void>>();
    auto assembled = ready->get_future();
    MiningJob<Block> job{[this, timestamp, ready](std::stop_token st) {
      return mine_next(timestamp, st, [&] { ready->set_value(); });
    }};
    assembled.wait();
    return job;
  }

  BlockVerdict receive_block(const Block& block) {
    std::lock_guard lock{mu_};
    auto hash = block.hash();
    if (blocks_.contains(hash)) return BlockVerdict::kAlreadyKnown;
    if (invalid_.contains(hash)) return BlockVerdict::kInvalidAncestor;
    if (invalid_.contains(block.header.parent)) {
      invalid_.insert(hash);
      return BlockVerdict::kInvalidAncestor;
    }
    auto parent_it = blocks_.find(block.header.parent);
    if (parent_it == blocks_.end()) return BlockVerdict::kOrphan;
    const auto& parent = parent_it->second;
    if (block.header.difficulty != genesis_.difficulty) return reject(hash, BlockVerdict::kBadDifficulty);
    if (block.header.timestamp < parent.header.timestamp) return reject(hash, BlockVerdict::kBadTimestamp);
    if (auto v = verify_block(block, parent, sig_cache_.get()); v != BlockVerdict::kAccepted) return reject(hash, v);

    blocks_.emplace(hash, block);
    const auto& tip = blocks_.at(canonical_.back());
    if (!preferred_tip(block.height(), hash, tip.height(), canonical_.back())) return BlockVerdict::kAccepted;
    return switch_to(hash);
  }

  [[nodiscard]] Hash256 tip_hash() const {
    std::lock_guard lock{mu_};
    return canonical_.back();
  }

  [[nodiscard]] std::uint64_t height() const {
    std::lock_guard lock{mu_};
    return canonical_.size() - 1;
  }

  [[nodiscard]] Block tip() const {
    std::lock_guard lock{mu_};
    return blocks_.at(canonical_.back());
  }

  [[nodiscard]] std::optional<Block> block_at(std::uint64_t height) const {
    std::lock_guard lock{mu_};
    if (height >= canonical_.size()) return std::nullopt;
    return blocks_.at(canonical_[height]);
  }

  [[nodiscard]] std::optional<Block> find_block(const Hash256& hash) const {
    std::lock_guard lock{mu_};
    auto it = blocks_.find(hash);
    if (it == blocks_.end()) return std::nullopt;
    return it->second;
  }

  // Genesis first.
  [[nodiscard]] std::vector<Block> canonical_chain() const {
    std::lock_guard lock{mu_};
    std::vector<Block> out;
    out.reserve(canonical_.size());
    for (const auto& h : canonical_) out.push_back(blocks_.at(h));
    return out;
  }

  // Ancestors of `hash` back to (excluding) genesis, oldest first.
  [[nodiscard]] std::vector<Block> branch_to(const Hash256& hash) const {
    std::lock_guard lock{mu_};
    std::vector<Block> out;
    auto it = blocks_.find(hash);
    while (it != blocks_.end() && it->second.height() > 0) {
      out.push_back(it->second);
      it = blocks_.find(it->second.header.parent);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // State as of the block with `confirmations` confirmations (the tip has one).
  [[nodiscard]] Snapshot snapshot(std::uint32_t confirmations = 1) const {
    std::lock_guard lock{mu_};
    auto tip_height = canonical_.size() - 1;
    auto depth = confirmations == 0 ? 0 : confirmations - 1;
    if (depth > tip_height) return genesis_state_;
    return state_at(tip_height - depth);
  }

  [[nodiscard]] std::optional<Receipt> receipt(const Hash256& tx_id) const { return snapshot()->receipt(tx_id); }

  [[nodiscard]] std::vector<LogEntry> query_logs(const LogFilter& filter) const { return snapshot()->query_logs(filter); }

  [[nodiscard]] std::size_t mempool_size() const {
    std::lock_guard lock{mu_};
    return mempool_.size();
  }

  [[nodiscard]] bool in_mempool(const Hash256& tx_id) const {
    std::lock_guard lock{mu_};
    return mempool_ids_.contains(tx_id);
  }

  // Nonce a client should use for its next transaction.
  [[nodiscard]] std::uint64_t next_nonce(const Address& a) const {
    std::lock_guard lock{mu_};
    return min_pending_nonce(a);
  }

  [[nodiscard]] std::uint64_t hash_attempts() const { return hash_attempts_.load(); }

 private:
  struct PendingTx {
    Hash256 id;
    Transaction tx;
  };

  // Adapts the pool to the span-of-transactions shape assemble_block wants
  // without copying payloads.
  class MempoolView {
   public:
    explicit MempoolView(const std::vector<PendingTx>& pool) : pool_{&pool} {}
    struct iterator {
      std::vector<PendingTx>::const_iterator it;
      const Transaction& operator*() const { return it->tx; }
      iterator& operator++() {
        ++it;
        return *this;
      }
      bool operator!=(const iterator& o) const { return it != o.it; }
    };
    [[nodiscard]] iterator begin() const { return {pool_->begin()}; }
    [[nodiscard]] iterator end() const { return {pool_->end()}; }

   private:
    const std::vector<PendingTx>* pool_;
  };

  MempoolView mempool_view() const { return MempoolView{mempool_}; }

  std::shared_ptr<const State> tip_state() const { return states_.rbegin()->second; }

  std::uint64_t min_pending_nonce(const Address& a) const {
    auto confirmed = tip_state()->next_nonce(a);
    auto it = pending_next_.find(a);
    return it == pending_next_.end() ? confirmed : std::max(confirmed, it->second);
  }

  BlockVerdict reject(const Hash256& hash, BlockVerdict v) {
    invalid_.insert(hash);
    return v;
  }

  // Executed state at a canonical height, replaying from the closest
  // retained state when it has been pruned.
  std::shared_ptr<const State> state_at(std::uint64_t height) const {
    if (auto it = states_.find(height); it != states_.end()) return it->second;
    auto base_it = states_.upper_bound(height);
    std::shared_ptr<const State> base = base_it == states_.begin() ? genesis_state_ : std::prev(base_it)->second;
    auto st = std::make_shared<State>(*base);
    for (auto h = base->height() + 1; h <= height; ++h) {
      const auto& b = blocks_.at(canonical_[h]);
      execute_block(*st, b, genesis_);
    }
    return st;
  }

  // Fork choice moved to `new_tip`; execute the new branch and adopt it, or
  // mark the offending block invalid and stay on the current chain.
  BlockVerdict switch_to(const Hash256& new_tip) {
    std::vector<Hash256> path;
    auto cursor = new_tip;
    while (true) {
      const auto& b = blocks_.at(cursor);
      if (b.height() < canonical_.size() && canonical_[b.height()] == cursor) break;
      path.push_back(cursor);
      cursor = b.header.parent;
    }
    std::reverse(path.begin(), path.end());
    auto ancestor_height = blocks_.at(cursor).height();

    auto base = state_at(ancestor_height);
    std::vector<std::shared_ptr<const State>> states;
    auto st = std::make_shared<State>(*base);
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto& b = blocks_.at(path[i]);
      if (auto v = execute_block(*st, b, genesis_); v != BlockVerdict::kAccepted) {
        for (std::size_t j = i; j < path.size(); ++j) {
          invalid_.insert(path[j]);
          blocks_.erase(path[j]);
        }
        return path[i] == new_tip ? v : BlockVerdict::kInvalidAncestor;
      }
      states.push_back(std::make_shared<const State>(*st));
    }
    adopt(path, std::move(states), ancestor_height);
    return BlockVerdict::kAccepted;
  }

  void adopt(const std::vector<Hash256>& path, std::vector<std::shared_ptr<const State>> states,
             std::uint64_t ancestor_height) {
    std::vector<Transaction> orphaned;
    for (auto h = ancestor_height + 1; h < canonical_.size(); ++h) {
      const auto& b = blocks_.at(canonical_[h]);
      orphaned.insert(orphaned.end(), b.transactions.begin(), b.transactions.end());
    }
    canonical_.resize(ancestor_height + 1);
    states_.erase(states_.upper_bound(ancestor_height), states_.end());
    std::unordered_set<Hash256> included;
    for (std::size_t i = 0; i < path.size(); ++i) {
      canonical_.push_back(path[i]);
      states_.emplace(blocks_.at(path[i]).height(), std::move(states[i]));
      for (const auto& tx : blocks_.at(path[i]).transactions) included.insert(tx.id());
    }
    while (states_.size() > retained_) states_.erase(states_.begin());

    // Orphaned transactions go back to the front of the pool in their old order.
    std::vector<PendingTx> pool;
    std::unordered_set<Hash256> ids;
    const auto& tip = *tip_state();
    auto keep = [&](PendingTx p) {
      if (included.contains(p.id) || ids.contains(p.id)) return;
      if (p.tx.nonce < tip.next_nonce(p.tx.sender)) return;
      ids.insert(p.id);
      pool.push_back(std::move(p));
    };
    for (auto& tx : orphaned) keep(PendingTx{tx.id(), std::move(tx)});
    for (auto& p : mempool_) keep(std::move(p));
    mempool_ = std::move(pool);
    mempool_ids_ = std::move(ids);
    pending_next_.clear();
    for (const auto& p : mempool_) {
      auto& n = pending_next_[p.tx.sender];
      n = std::max(n, p.tx.nonce + 1);
    }
    ++tip_version_;
  }

  GenesisConfig genesis_;
  Block genesis_block_;
  M initial_machine_;
  std::size_t retained_;

  mutable std::mutex mu_;
  std::unordered_map<Hash256, Block> blocks_;
  std::unordered_set<Hash256> invalid_;
  std::vector<Hash256> canonical_;
  std::map<std::uint64_t, std::shared_ptr<const State>> states_;
  std::shared_ptr<const State> genesis_state_;

  std::vector<PendingTx> mempool_;
  std::unordered_set<Hash256> mempool_ids_;
  std::unordered_map<Address, std::uint64_t> pending_next_;

  std::shared_ptr<SignatureCache> sig_cache_;
  std::atomic<std::uint64_t> tip_version_{0};
  std::atomic<std::uint64_t> hash_attempts_{0};
};

}  // namespace twinchain::ledger
