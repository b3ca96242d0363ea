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
#include <stdexcept>
#include <vector>

#include "twinchain/bench/report.hpp"
#include "twinchain/contracts/world.hpp"
#include "twinchain/ledger/node.hpp"

namespace twinchain::bench {

struct ModeGas {
  std::uint64_t deploy{0};
  std::uint64_t store{0};
};

// Fresh single-node chain per mode: deploy the registry, register one twin,
// then record the trust write (settlor, trustee and twin hash).
inline ModeGas measure_mode_gas(contracts::StorageMode mode, const contracts::GasSchedule& schedule = {}) {
  ledger::GenesisConfig g;
  g.chain_id = "twinchain-gas";
  g.node_count = 1;
  g.confirmations = 1;
  g.block_gas_limit = std::uint64_t{1} << 40;
  ledger::Node<contracts::TwinWorld> node{g, contracts::TwinWorld{schedule}};

  auto admin = ledger::KeyPair::from_label("bench-admin");
  auto settlor = ledger::KeyPair::from_label("bench-settlor");
  auto trustee = ledger::KeyPair::from_label("bench-trustee");
  std::int64_t time = 0;

  auto run = [&](const ledger::Transaction& tx) {
    auto id = node.submit_transaction(tx);
    node.mine_next(++time);
    auto r = node.receipt(id);
    if (!r || !r->ok()) throw std::logic_error{"gas bench transaction failed: " + (r ? r->revert_reason : "missing")};
    return *r;
  };

  ModeGas out;
  out.deploy = run(contracts::deploy_transaction(admin, mode, 0)).gas_used;
  auto registry = contracts::contract_address(admin.address(), 0);

  contracts::DigitalTwinConfig cfg{"meter01", settlor.address(), trustee.address(), 0, 86'400,
                                   contracts::DataView{900, contracts::ViewFormat::kJson}};
  run(contracts::call_transaction(settlor, registry, contracts::SetDigitalTwinCall{cfg}, 0));
  out.store =
      run(contracts::call_transaction(settlor, registry, contracts::RegisterTrustCall{trustee.address(), "meter01"}, 1))
          .gas_used;
  return out;
}

inline std::vector<GasReport> run_gas_bench(std::optional<contracts::StorageMode> only = std::nullopt,
                                            const contracts::GasSchedule& schedule = {}) {
  std::vector<GasReport> rows;
  for (auto mode : {contracts::StorageMode::kVariables, contracts::StorageMode::kLogs}) {
    if (only && *only != mode) continue;
    auto g = measure_mode_gas(mode, schedule);
    rows.push_back({mode, GasOperation::kDeploy, g.deploy, std::nullopt});
    rows.push_back({mode, GasOperation::kStore, g.store, std::nullopt});
  }
  fill_savings(rows);
  return rows;
}

}  // namespace twinchain::bench
