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
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "twinchain/contracts/world.hpp"
#include "twinchain/core/clock.hpp"
#include "twinchain/gateway/chain_client.hpp"
#include "twinchain/gateway/twin.hpp"
#include "twinchain/gateway/view.hpp"
#include "twinchain/ledger/network.hpp"
#include "twinchain/sensors/sensor.hpp"

namespace twinchain::bench {

struct SmartCityOptions {
  std::uint32_t difficulty{0};
  bool revoke{true};
  contracts::StorageMode mode{contracts::StorageMode::kLogs};
  std::optional<std::filesystem::path> dump_chain;
};

struct DemoResult {
  int passed{0};
  int failed{0};
  int skipped{0};

  [[nodiscard]] bool ok() const { return failed == 0; }
};

// One settlor, one consumption meter, two provider trustees with their own
// twins. Every request goes through a gateway reading a 3-node chain.
inline DemoResult run_smartcity(const SmartCityOptions& opt, std::ostream& log) {
  using contracts::StorageMode;
  DemoResult result;
  auto check = [&](bool cond, const std::string& what) {
    log << (cond ? "  [ok]   " : "  [FAIL] ") << what << '\n';
    (cond ? result.passed : result.failed)++;
    return cond;
  };
  auto skip = [&](const std::string& what) {
    log << "  [skip] " << what << '\n';
    result.skipped++;
  };

  ledger::GenesisConfig g;
  g.chain_id = "twinchain-smartcity";
  g.difficulty = opt.difficulty;
  g.node_count = 3;
  g.confirmations = 3;
  ledger::Network<contracts::TwinWorld> net{g};
  std::int64_t height_time = 0;
  auto settle = [&] {
    auto busy = [&] {
      for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.node(i).mempool_size() > 0) return true;
      }
      return false;
    };
    while (busy()) net.mine_round(++height_time);
    for (std::uint32_t i = 0; i < g.confirmations; ++i) net.mine_round(++height_time);
  };

  auto admin = ledger::KeyPair::from_label("city-admin");
  auto settlor = ledger::KeyPair::from_label("city-settlor");
  auto prov_a = ledger::KeyPair::from_label("provider-a");
  auto prov_b = ledger::KeyPair::from_label("provider-b");
  std::uint64_t settlor_nonce = 0;

  log << "deploy registry (" << contracts::to_string(opt.mode) << ", difficulty " << opt.difficulty << ")\n";
  auto registry = contracts::contract_address(admin.address(), 0);
  net.submit(0, contracts::deploy_transaction(admin, opt.mode, 0));
  settle();

  contracts::DigitalTwinConfig twin_a{"meter01-provA", settlor.address(), prov_a.address(), 0, 3'600,
                                      contracts::DataView{300, contracts::ViewFormat::kJson}};
  contracts::DigitalTwinConfig twin_b{"meter01-provB", settlor.address(), prov_b.address(), 1'800, 7'200,
                                      contracts::DataView{600, contracts::ViewFormat::kXml}};
  std::vector<Hash256> ids;
  for (const auto& cfg : {twin_a, twin_b}) {
    log << "register " << cfg.twin_id << " for trustee " << cfg.twin_trustee.hex().substr(0, 12) << '\n';
    auto set = contracts::call_transaction(settlor, registry, contracts::SetDigitalTwinCall{cfg}, settlor_nonce++);
    auto trust = contracts::call_transaction(settlor, registry,
                                             contracts::RegisterTrustCall{cfg.twin_trustee, cfg.twin_id}, settlor_nonce++);
    ids.push_back(net.submit(0, set));
    ids.push_back(net.submit(0, trust));
  }
  settle();
  bool all_ok = true;
  for (const auto& id : ids) {
    auto r = net.node(2).receipt(id);
    all_ok = all_ok && r && r->ok();
  }
  check(all_ok, "twin and trust transactions confirmed");
  check(net.converged(), "3 nodes converged at height " + std::to_string(net.node(0).height()));

  LogicalClock clock{3'600};
  auto meter = std::make_shared<const sensors::VirtualResource>(sensors::ResourceSpec{
      "meter01", sensors::Waveform::kSinusoid, 12.5, 4.0, 60, 7, 0, 3'600, "kWh"});
  auto endpoint = std::make_shared<gateway::LedgerEndpoint>(net.node(2), registry, g.confirmations);
  gateway::TwinService svc_a{twin_a.twin_id, endpoint, meter, clock};
  gateway::TwinService svc_b{twin_b.twin_id, endpoint, meter, clock};
  svc_a.start();
  svc_b.start();

  std::uint64_t nonce = 0;
  auto pull = [&](gateway::TwinService& svc, const ledger::KeyPair& who, const std::string& twin) {
    return svc.third_party(gateway::make_credential(who, twin, nonce++, clock.now()), std::nullopt, std::nullopt);
  };
  auto no_values = [](const gateway::Response& r) {
    auto j = nlohmann::json::parse(r.body, nullptr, false);
    return r.status == 403 && j.is_object() && j.size() == 2 && j.contains("denied") && j.contains("twin_id");
  };

  log << "pull views at t=" << clock.now() << '\n';
  auto a1 = pull(svc_a, prov_a, twin_a.twin_id);
  auto b1 = pull(svc_b, prov_b, twin_b.twin_id);
  check(a1.status == 200 && a1.content_type == "application/json", "provider A reads its JSON view");
  check(b1.status == 200 && b1.content_type == "application/xml", "provider B reads its XML view");
  if (a1.status == 200 && b1.status == 200) {
    auto pa = gateway::parse_view(a1.body, contracts::ViewFormat::kJson);
    auto pb = gateway::parse_view(b1.body, contracts::ViewFormat::kXml);
    log << "    A: " << pa.samples.size() << " samples every " << pa.period << "s over [" << pa.window.start << ", "
        << pa.window.end << "]\n";
    log << "    B: " << pb.samples.size() << " samples every " << pb.period << "s over [" << pb.window.start << ", "
        << pb.window.end << "]\n";
    check(a1.body != b1.body && pa.samples != pb.samples, "views of the one meter are distinct");
  }
  auto cross = pull(svc_a, prov_b, twin_a.twin_id);
  check(no_values(cross), "provider B denied on provider A's twin with no sensor values");

  if (!opt.revoke) {
    skip("revocation step disabled");
    skip("revoked trustee denied");
  } else {
    log << "revoke trust on " << twin_b.twin_id << '\n';
    auto id = net.submit(0, contracts::call_transaction(settlor, registry, contracts::RevokeTrustCall{twin_b.twin_id},
                                                        settlor_nonce++));
    settle();
    auto r = net.node(2).receipt(id);
    check(r && r->ok(), "revocation confirmed");
    auto b2 = pull(svc_b, prov_b, twin_b.twin_id);
    check(no_values(b2) && b2.deny == contracts::DenyReason::kNoTrust, "revoked trustee denied with no sensor values");
  }
  auto a2 = pull(svc_a, prov_a, twin_a.twin_id);
  check(a2.status == 200 && a2.body == a1.body, "provider A payload byte-identical");

  if (opt.dump_chain) {
    gateway::ChainDirectory::write(*opt.dump_chain, net.node(0), registry);
    log << "chain written to " << opt.dump_chain->string() << '\n';
  }
  log << result.passed << " passed, " << result.failed << " failed, " << result.skipped << " skipped\n";
  return result;
}

}  // namespace twinchain::bench
