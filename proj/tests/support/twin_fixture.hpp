#pragma once

#include <map>

#include "twinchain/contracts/world.hpp"
#include "twinchain/gateway/chain_client.hpp"
#include "twinchain/ledger/node.hpp"

namespace twinchain::testing {

// A single-node chain at difficulty 0 with one deployed registry.
struct ChainFixture {
  explicit ChainFixture(contracts::StorageMode mode = contracts::StorageMode::kLogs,
                        std::uint32_t confirmations = 3)
      : node{ledger::GenesisConfig{}}, admin{ledger::KeyPair::from_label("registry-admin")}, depth{confirmations} {
    auto nonce = nonces[admin.address()]++;
    registry = contracts::contract_address(admin.address(), nonce);
    node.submit_transaction(contracts::deploy_transaction(admin, mode, nonce));
    settle();
  }

  // Submits, mines until included, then buries the block `depth` deep.
  ledger::Receipt call(const ledger::KeyPair& key, const contracts::Call& c) {
    auto tx = contracts::call_transaction(key, registry, c, nonces[key.address()]++);
    auto id = node.submit_transaction(tx);
    settle();
    return *node.snapshot(1)->receipt(id);
  }

  void settle() {
    while (node.mempool_size() > 0) node.mine_next(++time);
    for (std::uint32_t i = 0; i < depth; ++i) node.mine_next(++time);
  }

  std::shared_ptr<gateway::LedgerEndpoint> endpoint() {
    return std::make_shared<gateway::LedgerEndpoint>(node, registry, depth);
  }

  gateway::TwinNode node;
  ledger::KeyPair admin;
  Address registry;
  std::uint32_t depth;
  std::map<Address, std::uint64_t> nonces;
  std::int64_t time{0};
};

}  // namespace twinchain::testing
