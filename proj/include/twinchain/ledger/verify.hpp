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

#include <mutex>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "twinchain/ledger/block.hpp"
#include "twinchain/ledger/error.hpp"
#include "twinchain/ledger/pow.hpp"

namespace twinchain::ledger {

// Remembers transaction ids whose signatures already verified. The id covers
// the signature bytes, so a hit is as good as re-verifying.
class SignatureCache {
 public:
  bool check(const Transaction& tx, const Hash256& id) {
    {
      std::lock_guard lock{mu_};
      if (verified_.contains(id)) return true;
    }
    if (!signature_valid(tx)) return false;
    std::lock_guard lock{mu_};
    verified_.insert(id);
    return true;
  }

 private:
  std::mutex mu_;
  std::unordered_set<Hash256> verified_;
};

// Context-free block checks: parent linkage, proof of work, tx_root, and
// per-transaction signatures and in-block nonce ordering. Stateful checks
// (nonces against the chain, state root) happen when the node executes it.
inline BlockVerdict verify_block(const Block& block, const Block& parent, SignatureCache* cache = nullptr) {
  const auto& h = block.header;
  if (h.parent != parent.hash() || h.height != parent.header.height + 1) return BlockVerdict::kBadParent;
  if (!proof_valid(h)) return BlockVerdict::kBadProof;
  if (h.tx_root != tx_root_of(block.transactions)) return BlockVerdict::kBadTxRoot;

  std::unordered_map<Address, std::uint64_t> last_nonce;
  for (const auto& tx : block.transactions) {
    bool ok = cache ? cache->check(tx, tx.id()) : signature_valid(tx);
    if (!ok) return BlockVerdict::kBadSignature;
    auto [it, fresh] = last_nonce.try_emplace(tx.sender, tx.nonce);
    if (!fresh) {
      if (tx.nonce <= it->second) return BlockVerdict::kBadNonce;
      it->second = tx.nonce;
    }
  }
  return BlockVerdict::kAccepted;
}

// Longest chain wins; equal lengths go to the lexicographically smaller tip
// hash. Both chains are full block lists starting at genesis.
inline const std::vector<Block>& resolve_fork(const std::vector<Block>& chain_a, const std::vector<Block>& chain_b) {
  if (chain_a.empty() || chain_b.empty() || chain_a.front().hash() != chain_b.front().hash()) {
    throw LedgerError{LedgerErrc::kIncompatibleGenesis};
  }
  if (chain_a.size() != chain_b.size()) return chain_a.size() > chain_b.size() ? chain_a : chain_b;
  return chain_a.back().hash() <= chain_b.back().hash() ? chain_a : chain_b;
}

// True when candidate (height, hash) should replace the current tip.
inline bool preferred_tip(std::uint64_t cand_height, const Hash256& cand_hash, std::uint64_t tip_height,
                          const Hash256& tip_hash) {
  if (cand_height != tip_height) return cand_height > tip_height;
  return cand_hash < tip_hash;
}

}  // namespace twinchain::ledger
