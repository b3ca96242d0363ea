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

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "twinchain/contracts/reader.hpp"
#include "twinchain/gateway/error.hpp"
#include "twinchain/ledger/dump.hpp"
#include "twinchain/ledger/node.hpp"

namespace twinchain::gateway {

using contracts::AccessDecision;
using contracts::DigitalTwinConfig;
using contracts::TrustStructure;
using TwinNode = ledger::Node<contracts::TwinWorld>;

// What a twin needs from the chain. Implementations throw
// GatewayError{kChainUnreachable} when the chain cannot be read.
class ChainEndpoint {
 public:
  virtual ~ChainEndpoint() = default;
  [[nodiscard]] virtual std::optional<DigitalTwinConfig> twin_config(std::string_view twin_id) = 0;
  [[nodiscard]] virtual AccessDecision validate_access(const Address& trustee, std::string_view twin_id,
                                                       std::int64_t now) = 0;
  [[nodiscard]] virtual std::optional<TrustStructure> trust(std::string_view twin_id) = 0;
};

// Reads one registry through a node, at a fixed confirmation depth.
class LedgerEndpoint : public ChainEndpoint {
 public:
  LedgerEndpoint(const TwinNode& node, Address registry, std::uint32_t confirmations = 3)
      : node_{&node}, registry_{registry}, confirmations_{confirmations} {}

  std::optional<DigitalTwinConfig> twin_config(std::string_view twin_id) override {
    return reader()->lookup(twin_id);
  }
  AccessDecision validate_access(const Address& trustee, std::string_view twin_id, std::int64_t now) override {
    return reader()->validate_access(trustee, twin_id, now);
  }
  std::optional<TrustStructure> trust(std::string_view twin_id) override { return reader()->trust(twin_id); }

 private:
  std::shared_ptr<const contracts::RegistryReader> reader() {
    auto snap = node_->snapshot(confirmations_);
    std::lock_guard lock{mu_};
    if (!cached_ || cached_hash_ != snap->block_hash()) {
      if (!snap->machine().registry(registry_)) throw GatewayError{GatewayErrc::kChainUnreachable, "registry not deployed"};
      cached_hash_ = snap->block_hash();
      cached_ = std::make_shared<const contracts::RegistryReader>(std::move(snap), registry_);
    }
    return cached_;
  }

  const TwinNode* node_{nullptr};
  Address registry_;
  std::uint32_t confirmations_{3};
  std::mutex mu_;
  Hash256 cached_hash_;
  std::shared_ptr<const contracts::RegistryReader> cached_;
};

// Chain directory layout: genesis.json, chain.ndjson (blocks after genesis),
// and optionally registry.txt holding the registry address. Without it the
// first deployed registry is used. The dump is replayed into a private node.
class ChainDirectory : public ChainEndpoint {
 public:
  explicit ChainDirectory(std::filesystem::path dir, std::uint32_t confirmations = 3)
      : dir_{std::move(dir)}, confirmations_{confirmations} {}

  std::optional<DigitalTwinConfig> twin_config(std::string_view twin_id) override {
    return load()->twin_config(twin_id);
  }
  AccessDecision validate_access(const Address& trustee, std::string_view twin_id, std::int64_t now) override {
    return load()->validate_access(trustee, twin_id, now);
  }
  std::optional<TrustStructure> trust(std::string_view twin_id) override { return load()->trust(twin_id); }

  static void write(const std::filesystem::path& dir, const TwinNode& node, const Address& registry) {
    std::filesystem::create_directories(dir);
    ledger::save_genesis(node.genesis(), (dir / "genesis.json").string());
    auto tmp = dir / "chain.ndjson.tmp";
    {
      std::ofstream out{tmp, std::ios::trunc};
      ledger::write_chain_dump(out, node.canonical_chain());
      if (!out) throw GatewayError{GatewayErrc::kChainUnreachable, "cannot write chain dump"};
    }
    std::filesystem::rename(tmp, dir / "chain.ndjson");
    std::ofstream{dir / "registry.txt", std::ios::trunc} << registry.hex() << '\n';
  }

 private:
  struct Loaded {
    std::unique_ptr<TwinNode> node;
    std::unique_ptr<LedgerEndpoint> endpoint;
  };

  LedgerEndpoint* load() {
    std::lock_guard lock{mu_};
    const auto chain = dir_ / "chain.ndjson";
    std::error_code ec;
    auto stamp = std::filesystem::last_write_time(chain, ec);
    if (ec) throw GatewayError{GatewayErrc::kChainUnreachable, chain.string()};
    if (loaded_.endpoint && stamp == stamp_) return loaded_.endpoint.get();
    try {
      Loaded next;
      next.node = std::make_unique<TwinNode>(ledger::load_genesis((dir_ / "genesis.json").string()));
      std::ifstream in{chain};
      ledger::restore_chain(*next.node, ledger::read_chain_dump(in));
      next.endpoint = std::make_unique<LedgerEndpoint>(*next.node, registry(*next.node), confirmations_);
      loaded_ = std::move(next);
      stamp_ = stamp;
    } catch (const GatewayError&) {
      throw;
    } catch (const std::exception& e) {
      throw GatewayError{GatewayErrc::kChainUnreachable, e.what()};
    }
    return loaded_.endpoint.get();
  }

  Address registry(const TwinNode& node) const {
    std::ifstream in{dir_ / "registry.txt"};
    std::string hex;
    if (in >> hex) return Address::from_hex(hex);
    const auto& all = node.snapshot(confirmations_)->machine().registries();
    if (all.empty()) throw GatewayError{GatewayErrc::kChainUnreachable, "no registry deployed"};
    return all.front();
  }

  std::filesystem::path dir_;
  std::uint32_t confirmations_;
  std::mutex mu_;
  std::filesystem::file_time_type stamp_{};
  Loaded loaded_;
};

}  // namespace twinchain::gateway
