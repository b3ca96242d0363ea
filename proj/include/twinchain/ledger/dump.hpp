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

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twinchain/ledger/block.hpp"
#include "twinchain/ledger/error.hpp"

namespace twinchain::ledger {

// Chain dump format: one JSON object per line, one block per object, in
// height order. Genesis is implied by the genesis file and not written.

inline nlohmann::json transaction_to_json(const Transaction& tx) {
  nlohmann::json j{{"sender", tx.sender.hex()},
                   {"payload", to_hex(tx.payload)},
                   {"nonce", tx.nonce},
                   {"signature", to_hex(tx.signature)}};
  j["target"] = tx.target ? nlohmann::json(tx.target->hex()) : nlohmann::json(nullptr);
  return j;
}

inline Transaction transaction_from_json(const nlohmann::json& j) {
  Transaction tx;
  tx.sender = Address::from_hex(j.at("sender").get<std::string>());
  if (!j.at("target").is_null()) tx.target = Address::from_hex(j.at("target").get<std::string>());
  tx.payload = from_hex(j.at("payload").get<std::string>());
  tx.nonce = j.at("nonce").get<std::uint64_t>();
  tx.signature = from_hex(j.at("signature").get<std::string>());
  return tx;
}

inline nlohmann::json block_to_json(const Block& b) {
  const auto& h = b.header;
  nlohmann::json txs = nlohmann::json::array();
  for (const auto& tx : b.transactions) txs.push_back(transaction_to_json(tx));
  return nlohmann::json{{"hash", b.hash().hex()},
                        {"parent", h.parent.hex()},
                        {"height", h.height},
                        {"timestamp", h.timestamp},
                        {"difficulty", h.difficulty},
                        {"tx_root", h.tx_root.hex()},
                        {"state_root", h.state_root.hex()},
                        {"gas_used", h.gas_used},
                        {"nonce", h.nonce},
                        {"transactions", txs}};
}

inline Block block_from_json(const nlohmann::json& j) {
  Block b;
  auto& h = b.header;
  h.parent = Hash256::from_hex(j.at("parent").get<std::string>());
  h.height = j.at("height").get<std::uint64_t>();
  h.timestamp = j.at("timestamp").get<std::int64_t>();
  h.difficulty = j.at("difficulty").get<std::uint32_t>();
  h.tx_root = Hash256::from_hex(j.at("tx_root").get<std::string>());
  h.state_root = Hash256::from_hex(j.at("state_root").get<std::string>());
  h.gas_used = j.at("gas_used").get<std::uint64_t>();
  h.nonce = j.at("nonce").get<std::uint64_t>();
  for (const auto& t : j.at("transactions")) b.transactions.push_back(transaction_from_json(t));
  if (j.contains("hash") && Hash256::from_hex(j.at("hash").get<std::string>()) != b.hash()) {
    throw LedgerError{LedgerErrc::kBadChainDump, "hash mismatch at height " + std::to_string(h.height)};
  }
  return b;
}

// Writes blocks (genesis skipped) one per line.
inline void write_chain_dump(std::ostream& out, const std::vector<Block>& chain) {
  for (const auto& b : chain) {
    if (b.height() == 0) continue;
    out << block_to_json(b).dump() << '\n';
  }
}

inline std::vector<Block> read_chain_dump(std::istream& in) {
  std::vector<Block> blocks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      blocks.push_back(block_from_json(nlohmann::json::parse(line)));
    } catch (const LedgerError&) {
      throw;
    } catch (const std::exception& e) {
      throw LedgerError{LedgerErrc::kBadChainDump, "line " + std::to_string(line_no) + ": " + e.what()};
    }
  }
  return blocks;
}

// Replays a dump into a node; every block must be accepted.
template <class NodeT>
void restore_chain(NodeT& node, const std::vector<Block>& blocks) {
  for (const auto& b : blocks) {
    auto v = node.receive_block(b);
    if (v != BlockVerdict::kAccepted && v != BlockVerdict::kAlreadyKnown) {
      throw LedgerError{LedgerErrc::kBadChainDump,
                        "block " + std::to_string(b.height()) + " rejected: " + std::string{to_string(v)}};
    }
  }
}

}  // namespace twinchain::ledger
