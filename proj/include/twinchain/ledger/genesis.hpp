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

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twinchain/core/sha256.hpp"
#include "twinchain/ledger/block.hpp"
#include "twinchain/ledger/error.hpp"

namespace twinchain::ledger {

// Chain-wide parameters fixed at genesis. Difficulty is static for the run.
struct GenesisConfig {
  std::string chain_id{"twinchain-local"};
  std::uint32_t difficulty{0};
  std::uint32_t node_count{3};
  std::int64_t timestamp{0};
  std::uint64_t block_gas_limit{600'000};
  std::uint32_t confirmations{3};
  // Permissioned account set; empty admits any signer.
  std::vector<Address> accounts;

  [[nodiscard]] bool permits(const Address& a) const {
    return accounts.empty() || std::find(accounts.begin(), accounts.end(), a) != accounts.end();
  }

  [[nodiscard]] Hash256 commitment() const {
    Writer w;
    w.str(chain_id).u32(difficulty).u32(node_count).i64(timestamp).u64(block_gas_limit).u32(confirmations).u32(
        static_cast<std::uint32_t>(accounts.size()));
    for (const auto& a : accounts) w.address(a);
    return sha256(w.data());
  }

  // Genesis is not mined; its state_root field commits to the configuration,
  // so differing configurations never share a genesis hash.
  [[nodiscard]] Block genesis_block() const {
    Block b;
    b.header.height = 0;
    b.header.timestamp = timestamp;
    b.header.difficulty = difficulty;
    b.header.tx_root = tx_root_of(b.transactions);
    b.header.state_root = commitment();
    return b;
  }
};

inline void to_json(nlohmann::json& j, const GenesisConfig& g) {
  std::vector<std::string> accounts;
  for (const auto& a : g.accounts) accounts.push_back(a.hex());
  j = nlohmann::json{{"chain_id", g.chain_id},
                     {"difficulty", g.difficulty},
                     {"node_count", g.node_count},
                     {"timestamp", g.timestamp},
                     {"block_gas_limit", g.block_gas_limit},
                     {"confirmations", g.confirmations},
                     {"accounts", accounts}};
}

inline void from_json(const nlohmann::json& j, GenesisConfig& g) {
  GenesisConfig d;
  g.chain_id = j.value("chain_id", d.chain_id);
  g.difficulty = j.value("difficulty", d.difficulty);
  g.node_count = j.value("node_count", d.node_count);
  g.timestamp = j.value("timestamp", d.timestamp);
  g.block_gas_limit = j.value("block_gas_limit", d.block_gas_limit);
  g.confirmations = j.value("confirmations", d.confirmations);
  g.accounts.clear();
  for (const auto& a : j.value("accounts", std::vector<std::string>{})) g.accounts.push_back(Address::from_hex(a));
  if (g.node_count == 0) throw std::invalid_argument{"genesis node_count must be at least 1"};
  if (g.difficulty > 64) throw std::invalid_argument{"genesis difficulty above 64 bits is not supported"};
}

inline GenesisConfig load_genesis(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error{"cannot open genesis file " + path};
  return nlohmann::json::parse(in).get<GenesisConfig>();
}

inline void save_genesis(const GenesisConfig& g, const std::string& path) {
  std::ofstream out{path, std::ios::trunc};
  if (!out) throw std::runtime_error{"cannot write genesis file " + path};
  out << nlohmann::json(g).dump(2) << '\n';
}

}  // namespace twinchain::ledger
