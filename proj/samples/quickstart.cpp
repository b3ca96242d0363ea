// Registers one twin on a local chain and reads the trustee's view through it.

#include <iostream>

#include "twinchain/contracts/world.hpp"
#include "twinchain/gateway/chain_client.hpp"
#include "twinchain/gateway/twin.hpp"
#include "twinchain/sensors/sensor.hpp"

using namespace twinchain;

int main() {
  ledger::GenesisConfig genesis;  // difficulty 0, three confirmations
  gateway::TwinNode node{genesis};
  std::int64_t height_time = 0;
  auto settle = [&] {
    while (node.mempool_size() > 0) node.mine_next(++height_time);
    for (std::uint32_t i = 0; i < genesis.confirmations; ++i) node.mine_next(++height_time);
  };

  auto settlor = ledger::KeyPair::from_label("quickstart-settlor");
  auto trustee = ledger::KeyPair::from_label("quickstart-trustee");

  auto registry = contracts::contract_address(settlor.address(), 0);
  node.submit_transaction(contracts::deploy_transaction(settlor, contracts::StorageMode::kLogs, 0));

  contracts::DigitalTwinConfig twin{"meter01", settlor.address(), trustee.address(), 0, 3'600,
                                    contracts::DataView{600, contracts::ViewFormat::kJson}};
  node.submit_transaction(contracts::call_transaction(settlor, registry, contracts::SetDigitalTwinCall{twin}, 1));
  node.submit_transaction(
      contracts::call_transaction(settlor, registry, contracts::RegisterTrustCall{trustee.address(), "meter01"}, 2));
  settle();

  sensors::ResourceSpec spec;
  spec.resource_id = "meter01";
  spec.waveform = sensors::Waveform::kSinusoid;
  spec.base = 12.5;
  spec.amplitude = 4.0;
  spec.interval = 60;
  spec.unit = "kWh";

  LogicalClock clock{3'600};
  gateway::TwinService service{"meter01", std::make_shared<gateway::LedgerEndpoint>(node, registry),
                               std::make_shared<const sensors::VirtualResource>(spec), clock};
  service.start();

  auto view = service.third_party(gateway::make_credential(trustee, "meter01", 1, clock.now()), std::nullopt,
                                  std::nullopt);
  std::cout << view.status << ' ' << view.body << '\n';

  auto stranger = ledger::KeyPair::from_label("quickstart-stranger");
  auto denied = service.third_party(gateway::make_credential(stranger, "meter01", 2, clock.now()), std::nullopt,
                                    std::nullopt);
  std::cout << denied.status << ' ' << denied.body << '\n';
  return view.status == 200 && denied.status == 403 ? 0 : 1;
}
