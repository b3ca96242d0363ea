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

#include <memory>
#include <optional>
#include <vector>

#include "twinchain/contracts/world.hpp"
#include "twinchain/ledger/chain_state.hpp"

namespace twinchain::contracts {

using WorldState = ledger::ChainState<TwinWorld>;

// Read-only registry queries against a ledger snapshot. Variables mode reads
// contract storage; Logs mode rebuilds the registry from the event log.
class RegistryReader {
 private:
  template <class F>
  decltype(auto) with_lookup(F&& f) const {
    if (projection_) return f(*projection_);
    return f(*snapshot_->machine().registry(registry_)->variables());
  }

 public:
  RegistryReader(std::shared_ptr<const WorldState> snapshot, const Address& registry)
      : snapshot_{std::move(snapshot)}, registry_{registry} {
    const auto* r = snapshot_->machine().registry(registry_);
    if (!r) throw ContractError{ContractErrc::kNoContract};
    mode_ = r->mode();
    if (mode_ == StorageMode::kLogs) projection_ = project(snapshot_->query_logs(ledger::LogFilter{registry_, {}}));
  }

  [[nodiscard]] StorageMode mode() const { return mode_; }
  [[nodiscard]] std::uint64_t height() const { return snapshot_->height(); }

  [[nodiscard]] std::uint64_t twin_count() const {
    return with_lookup([](const auto& b) { return b.twin_count(); });
  }

  // Settlor-only, as on chain.
  [[nodiscard]] DigitalTwinConfig get_digital_twin(const Address& caller, std::uint64_t index) const {
    return with_lookup([&](const auto& b) { return settlor_read(b, caller, index); });
  }

  // Registry contents are public chain data; guarded reads are get_digital_twin.
  [[nodiscard]] std::optional<DigitalTwinConfig> lookup(std::string_view twin_id) const {
    return with_lookup([&](const auto& b) -> std::optional<DigitalTwinConfig> {
      auto i = b.index_of(twin_id);
      if (!i) return std::nullopt;
      return b.twin(*i);
    });
  }

  [[nodiscard]] std::optional<DigitalTwinConfig> find_settlor_twin(const Address& caller,
                                                                   std::string_view twin_id) const {
    return with_lookup([&](const auto& b) -> std::optional<DigitalTwinConfig> {
      auto i = b.index_of(twin_id);
      if (!i) return std::nullopt;
      auto cfg = b.twin(*i);
      if (cfg.twin_settlor != caller) return std::nullopt;
      return cfg;
    });
  }

  [[nodiscard]] AccessDecision validate_access(const Address& trustee, std::string_view twin_id,
                                               std::int64_t now) const {
    return with_lookup([&](const auto& b) { return decide_access(b, trustee, twin_id, now); });
  }

  [[nodiscard]] std::optional<TrustStructure> trust(std::string_view twin_id) const {
    return with_lookup([&](const auto& b) { return b.trust(twin_id); });
  }

 private:

  std::shared_ptr<const WorldState> snapshot_;
  Address registry_;
  StorageMode mode_{StorageMode::kVariables};
  std::optional<RegistryProjection> projection_;
};

// Registration events naming `settlor` in the indexed settlor topic.
inline std::vector<ledger::LogEntry> settlor_events(const WorldState& state, const Address& registry,
                                                    const Address& settlor) {
  return state.query_logs(ledger::LogFilter{registry, {std::nullopt, settlor.digest}});
}

}  // namespace twinchain::contracts
