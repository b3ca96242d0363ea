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

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "twinchain/ledger/node.hpp"

namespace twinchain::ledger {

// In-process message bus among N node replicas. Delivery is FIFO and only
// happens inside pump(), so runs are deterministic. One designated miner per
// round, chosen round-robin. submit() may be called from other threads while
// one thread drives the rounds.
template <StateMachine M>
class Network {
 public:
  using NodeType = Node<M>;

  struct TxAnnounce {
    Transaction tx;
  };
  struct BlockAnnounce {
    Block block;
  };
  struct ChainRequest {
    Hash256 tip;
  };
  struct ChainResponse {
    std::vector<Block> blocks;
  };
  using Payload = std::variant<TxAnnounce, BlockAnnounce, ChainRequest, ChainResponse>;

  struct Message {
    std::size_t from;
    std::size_t to;
    Payload payload;
  };

  explicit Network(const GenesisConfig& genesis, std::function<M()> factory = [] { return M{}; }) {
    auto cache = std::make_shared<SignatureCache>();
    for (std::uint32_t i = 0; i < std::max<std::uint32_t>(genesis.node_count, 1); ++i) {
      nodes_.push_back(std::make_unique<NodeType>(genesis, factory(), 64, cache));
    }
  }

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  NodeType& node(std::size_t i) { return *nodes_.at(i); }
  const NodeType& node(std::size_t i) const { return *nodes_.at(i); }

  // Admits at node `at` (throws like Node::submit_transaction) and gossips.
  Hash256 submit(std::size_t at, const Transaction& tx) {
    auto id = node(at).submit_transaction(tx);
    broadcast(at, TxAnnounce{tx});
    return id;
  }

  // The round's designated miner mines on a worker thread; the block is then
  // broadcast and the bus pumped to quiescence.
  std::optional<Block> mine_round(std::int64_t timestamp) {
    auto miner = round_++ % nodes_.size();
    return mine_on(miner, timestamp);
  }

  std::optional<Block> mine_on(std::size_t miner, std::int64_t timestamp) {
    pump();
    auto job = node(miner).start_mining(timestamp);
    auto block = job.wait();
    if (block) {
      broadcast(miner, BlockAnnounce{*block});
      pump();
    }
    return block;
  }

  void pump() {
    while (true) {
      std::unique_lock lock{bus_mu_};
      if (queue_.empty()) return;
      auto msg = std::move(queue_.front());
      queue_.pop_front();
      lock.unlock();
      if (!linked(msg.from, msg.to)) continue;
      deliver(msg);
    }
  }

  // Nodes in different groups stop hearing each other until heal().
  void partition(std::vector<std::vector<std::size_t>> groups) {
    group_of_.assign(nodes_.size(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (auto n : groups[g]) group_of_.at(n) = g + 1;
    }
  }

  // Reconnects everyone; each node re-announces its tip so stragglers sync.
  void heal() {
    group_of_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) broadcast(i, BlockAnnounce{node(i).tip()});
    pump();
  }

  [[nodiscard]] bool converged() const {
    for (const auto& n : nodes_) {
      if (n->tip_hash() != nodes_.front()->tip_hash()) return false;
    }
    return true;
  }

  [[nodiscard]] std::size_t round() const { return round_; }

 private:
  bool linked(std::size_t a, std::size_t b) const {
    if (group_of_.empty()) return true;
    return group_of_[a] == group_of_[b];
  }

  void broadcast(std::size_t from, Payload p) {
    std::lock_guard lock{bus_mu_};
    for (std::size_t to = 0; to < nodes_.size(); ++to) {
      if (to != from) queue_.push_back(Message{from, to, p});
    }
  }

  void send(std::size_t from, std::size_t to, Payload p) {
    std::lock_guard lock{bus_mu_};
    queue_.push_back(Message{from, to, std::move(p)});
  }

  void deliver(const Message& msg) {
    auto& target = node(msg.to);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TxAnnounce>) {
            try {
              target.submit_transaction(p.tx);
            } catch (const LedgerError&) {
              // duplicates and stale gossip are expected
            }
          } else if constexpr (std::is_same_v<T, BlockAnnounce>) {
            auto v = target.receive_block(p.block);
            if (v == BlockVerdict::kOrphan) send(msg.to, msg.from, ChainRequest{p.block.hash()});
            if (v == BlockVerdict::kAccepted) relay(msg.to, msg.from, p.block);
          } else if constexpr (std::is_same_v<T, ChainRequest>) {
            send(msg.to, msg.from, ChainResponse{target.branch_to(p.tip)});
          } else {
            for (const auto& b : p.blocks) target.receive_block(b);
          }
        },
        msg.payload);
  }

  // Forward newly accepted blocks so a partially connected mesh still converges.
  void relay(std::size_t at, std::size_t from, const Block& b) {
    std::lock_guard lock{bus_mu_};
    for (std::size_t to = 0; to < nodes_.size(); ++to) {
      if (to != at && to != from) queue_.push_back(Message{at, to, BlockAnnounce{b}});
    }
  }

  std::vector<std::unique_ptr<NodeType>> nodes_;
  std::mutex bus_mu_;
  std::deque<Message> queue_;
  std::vector<std::size_t> group_of_;
  std::size_t round_{0};
};

}  // namespace twinchain::ledger
