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

#include <string>
#include <vector>

#include "twinchain/contracts/registry.hpp"
#include "twinchain/ledger/receipt.hpp"
#include "twinchain/ledger/transaction.hpp"

namespace twinchain::contracts {

inline Address contract_address(const Address& deployer, std::uint64_t nonce) {
  Sha256 h;
  h.update("twinchain-contract");
  h.update(deployer.digest);
  h.update(word_from_u64(nonce));
  return Address{h.finish()};
}

inline std::uint64_t deploy_gas(const GasSchedule& s, StorageMode mode) {
  return charge(s, gas_op::Tx{}) + charge(s, gas_op::Deploy{registry_definition_size(mode)});
}

// The ledger state machine hosting every deployed registry.
class TwinWorld {
 public:
  explicit TwinWorld(GasSchedule schedule = {}) : schedule_{schedule} {}

  ledger::ExecOutcome execute(const ledger::Transaction& tx, const ledger::ExecContext&) {
    GasMeter meter{schedule_};
    ledger::ExecOutcome out;
    try {
      auto call = decode_call(tx.payload);
      if (const auto* deploy = std::get_if<DeployCall>(&call)) {
        if (tx.target) throw ContractError{ContractErrc::kBadPayload};
        auto addr = contract_address(tx.sender, tx.nonce);
        meter.add(gas_op::Deploy{registry_definition_size(deploy->mode)});
        registries_.insert_or_assign(addr, Registry{addr, deploy->mode});
        order_.push_back(addr);
        out.output.assign(addr.digest.bytes.begin(), addr.digest.bytes.end());
      } else {
        if (!tx.target) throw ContractError{ContractErrc::kBadPayload};
        const auto* current = registries_.find(*tx.target);
        if (!current) throw ContractError{ContractErrc::kNoContract};
        auto next = *current;
        next.apply(call, tx.sender, meter, out.logs);
        if (std::holds_alternative<SetDigitalTwinCall>(call)) {
          Writer w;
          w.u64(next.twin_count() - 1);
          out.output = std::move(w).take();
        }
        registries_.insert_or_assign(*tx.target, std::move(next));
      }
      out.gas_used = meter.used();
    } catch (const ContractError& e) {
      return revert(e.what());
    } catch (const DecodeError& e) {
      return revert(std::string{to_string(ContractErrc::kBadPayload)} + ": " + e.what());
    } catch (const ledger::LedgerError& e) {
      return revert(e.what());
    }
    return out;
  }

  [[nodiscard]] Hash256 state_root() const {
    Sha256 h;
    h.update("twinchain-world");
    for (const auto& addr : order_) {
      const auto& r = *registries_.find(addr);
      const auto mode = static_cast<std::uint8_t>(r.mode());
      h.update(addr.digest);
      h.update(ByteView{&mode, 1});
      h.update(r.root());
    }
    return h.finish();
  }

  [[nodiscard]] const Registry* registry(const Address& a) const { return registries_.find(a); }
  [[nodiscard]] const std::vector<Address>& registries() const { return order_; }
  [[nodiscard]] const GasSchedule& schedule() const { return schedule_; }

 private:
  ledger::ExecOutcome revert(std::string reason) const {
    ledger::ExecOutcome out;
    out.status = ledger::ReceiptStatus::kReverted;
    out.gas_used = schedule_.tx_base;
    out.revert_reason = std::move(reason);
    return out;
  }

  GasSchedule schedule_;
  CowMap<Address, Registry> registries_;
  std::vector<Address> order_;
};

static_assert(ledger::StateMachine<TwinWorld>);

inline ledger::Transaction deploy_transaction(const ledger::KeyPair& key, StorageMode mode, std::uint64_t nonce) {
  return ledger::make_transaction(key, std::nullopt, encode_call(DeployCall{mode}), nonce);
}

inline ledger::Transaction call_transaction(const ledger::KeyPair& key, const Address& registry, const Call& call,
                                            std::uint64_t nonce) {
  return ledger::make_transaction(key, registry, encode_call(call), nonce);
}

}  // namespace twinchain::contracts
