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

#include <concepts>
#include <string>
#include <vector>

#include "twinchain/ledger/log.hpp"
#include "twinchain/ledger/transaction.hpp"

namespace twinchain::ledger {

enum class ReceiptStatus : std::uint8_t { kSuccess = 0, kReverted = 1 };

struct Receipt {
  Hash256 tx_id;
  ReceiptStatus status{ReceiptStatus::kSuccess};
  std::uint64_t gas_used{0};
  std::vector<LogEntry> logs;
  Bytes output;
  std::string revert_reason;
  std::uint64_t block_height{0};

  [[nodiscard]] bool ok() const { return status == ReceiptStatus::kSuccess; }
};

struct ExecContext {
  std::uint64_t height{0};
  std::int64_t timestamp{0};
  Hash256 tx_id;
};

struct ExecOutcome {
  ReceiptStatus status{ReceiptStatus::kSuccess};
  std::uint64_t gas_used{0};
  std::vector<LogEntry> logs;
  Bytes output;
  std::string revert_reason;
};

// What the ledger needs from the contract layer. Copies must be cheap: the
// node keeps one state per recent block.
template <class M>
concept StateMachine = std::copyable<M> && requires(M m, const M cm, const Transaction& tx, const ExecContext& ctx) {
  { m.execute(tx, ctx) } -> std::same_as<ExecOutcome>;
  { cm.state_root() } -> std::same_as<Hash256>;
};

}  // namespace twinchain::ledger
