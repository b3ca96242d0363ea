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

#include <cstddef>
#include <cstdint>
#include <variant>

namespace twinchain::contracts {

// Per-operation gas costs. tx_base and log_base are the two figures the
// design is anchored to; the rest use conventional EVM magnitudes.
struct GasSchedule {
  std::uint64_t tx_base{21'000};
  std::uint64_t log_base{375};
  std::uint64_t log_topic{375};
  std::uint64_t log_data_byte{8};
  std::uint64_t sstore_set{20'000};
  std::uint64_t sstore_update{5'000};
  std::uint64_t deploy_base{32'000};
  std::uint64_t code_byte{200};

  [[nodiscard]] bool valid() const {
    return tx_base > 0 && log_base > 0 && log_topic > 0 && log_data_byte > 0 && sstore_set > 0 && sstore_update > 0 &&
           deploy_base > 0 && code_byte > 0;
  }

  friend bool operator==(const GasSchedule&, const GasSchedule&) = default;
};

namespace gas_op {
struct Tx {};
struct Log {
  std::size_t topics{0};
  std::size_t data_bytes{0};
};
struct SstoreSet {
  std::size_t slots{1};
};
struct SstoreUpdate {
  std::size_t slots{1};
};
struct Deploy {
  std::size_t code_bytes{0};
};
}  // namespace gas_op

using GasOp = std::variant<gas_op::Tx, gas_op::Log, gas_op::SstoreSet, gas_op::SstoreUpdate, gas_op::Deploy>;

constexpr std::uint64_t charge(const GasSchedule& s, const GasOp& op) {
  struct Visitor {
    const GasSchedule& s;
    constexpr std::uint64_t operator()(gas_op::Tx) const { return s.tx_base; }
    constexpr std::uint64_t operator()(gas_op::Log l) const {
      return s.log_base + s.log_topic * l.topics + s.log_data_byte * l.data_bytes;
    }
    constexpr std::uint64_t operator()(gas_op::SstoreSet o) const { return s.sstore_set * o.slots; }
    constexpr std::uint64_t operator()(gas_op::SstoreUpdate o) const { return s.sstore_update * o.slots; }
    constexpr std::uint64_t operator()(gas_op::Deploy d) const { return s.deploy_base + s.code_byte * d.code_bytes; }
  };
  return std::visit(Visitor{s}, op);
}

// Receipt gas is tx_base plus the sum of charges made while executing.
class GasMeter {
 public:
  explicit GasMeter(const GasSchedule& s) : schedule_{&s}, used_{s.tx_base} {}

  void add(const GasOp& op) { used_ += charge(*schedule_, op); }
  [[nodiscard]] std::uint64_t used() const { return used_; }
  [[nodiscard]] const GasSchedule& schedule() const { return *schedule_; }

 private:
  const GasSchedule* schedule_;
  std::uint64_t used_;
};

}  // namespace twinchain::contracts
