// twinchain: benchmarks, the smart-city demo, and a standalone twin process.

#include <csignal>
#include <iomanip>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "twinchain/bench/config.hpp"
#include "twinchain/bench/gas_bench.hpp"
#include "twinchain/bench/latency.hpp"
#include "twinchain/bench/report.hpp"
#include "twinchain/bench/smartcity.hpp"
#include "twinchain/gateway/http.hpp"

namespace {

using namespace twinchain;

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;

std::atomic<bool> g_stop{false};

std::optional<contracts::StorageMode> mode_arg(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return contracts::storage_mode_from_string(s);
}

int bench_gas(const bench::BenchConfig& cfg, const std::string& mode, const std::string& out) {
  auto rows = bench::run_gas_bench(mode_arg(mode), cfg.schedule);
  std::cout << std::left << std::setw(11) << "mode" << std::setw(9) << "op" << std::right << std::setw(10) << "gas"
            << std::setw(10) << "saving" << '\n';
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(11) << contracts::to_string(r.mode) << std::setw(9) << to_string(r.operation)
              << std::right << std::setw(10) << r.gas_used << std::setw(9)
              << (r.saving_vs_variables ? bench::detail::fixed(*r.saving_vs_variables, 2) + "%" : "-") << '\n';
  }
  if (!out.empty()) bench::emit_csv(rows, out);

  auto find = [&](contracts::StorageMode m, bench::GasOperation op) -> const bench::GasReport* {
    for (const auto& r : rows) {
      if (r.mode == m && r.operation == op) return &r;
    }
    return nullptr;
  };
  auto dv = find(contracts::StorageMode::kVariables, bench::GasOperation::kDeploy);
  auto dl = find(contracts::StorageMode::kLogs, bench::GasOperation::kDeploy);
  auto sv = find(contracts::StorageMode::kVariables, bench::GasOperation::kStore);
  auto sl = find(contracts::StorageMode::kLogs, bench::GasOperation::kStore);
  if (dv && dl && sv && sl) {
    bool deploy_ok = dl->gas_used * 10 <= dv->gas_used * 7;
    bool store_ok = sl->gas_used < sv->gas_used;
    std::cout << "deploy logs <= 70% of variables: " << (deploy_ok ? "yes" : "NO") << '\n'
              << "store logs < variables: " << (store_ok ? "yes" : "NO") << '\n';
    if (!deploy_ok || !store_ok) return kAssertion;
  }
  return kOk;
}

int bench_latency(bench::BenchConfig cfg, const std::string& mode, const std::string& out) {
  std::vector<bench::LatencyReport> rows;
  std::cout << std::left << std::setw(11) << "mode" << std::right << std::setw(7) << "n" << std::setw(14) << "total_s"
            << std::setw(14) << "mean_ms" << std::setw(10) << "blocks" << '\n';
  bool consistent = true;
  for (auto m : {contracts::StorageMode::kVariables, contracts::StorageMode::kLogs}) {
    if (auto only = mode_arg(mode); only && *only != m) continue;
    for (auto n : cfg.n_list) {
      auto c = cfg.latency;
      c.mode = m;
      c.n_twins = n;
      auto r = bench::run_latency(c);
      consistent = consistent && r.consistent();
      std::cout << std::left << std::setw(11) << contracts::to_string(m) << std::right << std::setw(7) << n
                << std::setw(14) << bench::detail::fixed(r.total_latency_s, 3) << std::setw(14)
                << bench::detail::fixed(r.mean_per_tx_ms, 3) << std::setw(10) << bench::detail::fixed(r.blocks, 1)
                << std::endl;
      rows.push_back(r);
    }
  }
  if (!out.empty()) bench::emit_csv(rows, out);
  return consistent ? kOk : kAssertion;
}

int twin_start(const bench::BenchConfig& cfg, const std::string& id, const std::string& chain,
               const std::string& resource, const std::string& fleet_file, const std::string& host,
               std::uint16_t port, std::uint16_t dt_port) {
  sensors::Fleet fleet;
  sensors::load_fleet(fleet, cfg.resources);
  if (!fleet_file.empty()) {
    std::ifstream in{fleet_file};
    if (!in) throw std::invalid_argument{"cannot open fleet " + fleet_file};
    sensors::load_fleet(fleet, nlohmann::json::parse(in));
  }
  static SystemClock clock;
  auto service = std::make_shared<gateway::TwinService>(id, std::make_shared<gateway::ChainDirectory>(chain),
                                                        fleet.find(resource), clock);
  gateway::TwinInstance instance{service, host};
  instance.start({port, dt_port});
  std::cout << "twin " << id << " http " << host << ':' << instance.http_port() << " dt " << host << ':'
            << instance.dt_port() << std::endl;
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds{200});
  instance.stop();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twinchain: digital twins over a proof-of-work ledger"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "CSV output path");

  auto* bench_cmd = app.add_subcommand("bench", "gas and latency benchmarks");
  bench_cmd->require_subcommand(1);
  std::string gas_mode;
  auto* gas = bench_cmd->add_subcommand("gas", "deployment and trust-write gas per storage mode");
  gas->add_option("--mode", gas_mode, "variables or logs")->check(CLI::IsMember({"variables", "logs"}));

  std::string n_text, lat_mode;
  std::optional<std::uint32_t> difficulty, runs, workers;
  std::optional<std::uint64_t> seed;
  auto* latency = bench_cmd->add_subcommand("latency", "twin-creation latency");
  latency->add_option("--n", n_text, "twin counts: 1000..5000, 1000..5000:500 or 1000,2000");
  latency->add_option("--difficulty", difficulty, "leading zero bits")->check(CLI::Range(0, 64));
  latency->add_option("--runs", runs)->check(CLI::PositiveNumber);
  latency->add_option("--workers", workers, "submission threads, 0 for sequential");
  latency->add_option("--seed", seed);
  latency->add_option("--mode", lat_mode)->check(CLI::IsMember({"variables", "logs"}));

  auto* demo = app.add_subcommand("demo", "scripted scenarios");
  demo->require_subcommand(1);
  bench::SmartCityOptions city;
  bool no_revoke = false;
  std::string dump, city_mode = "logs";
  auto* smartcity = demo->add_subcommand("smartcity", "two providers, one meter, one revocation");
  smartcity->add_flag("--no-revoke", no_revoke, "skip the revocation step");
  smartcity->add_option("--difficulty", city.difficulty)->check(CLI::Range(0, 64));
  smartcity->add_option("--dump-chain", dump, "write genesis and chain to this directory");
  smartcity->add_option("--mode", city_mode)->check(CLI::IsMember({"variables", "logs"}));

  auto* twin = app.add_subcommand("twin", "run a twin instance");
  twin->require_subcommand(1);
  std::string twin_id, chain_dir, resource, fleet_file, host = "127.0.0.1";
  std::uint16_t port = 0, dt_port = 0;
  auto* start = twin->add_subcommand("start", "serve one twin until interrupted");
  start->add_option("--id", twin_id)->required();
  start->add_option("--chain", chain_dir, "directory holding genesis.json and chain.ndjson")->required();
  start->add_option("--resource", resource, "resource id")->required();
  start->add_option("--fleet", fleet_file, "JSON array of resource specs");
  start->add_option("--host", host);
  start->add_option("--port", port);
  start->add_option("--dt-port", dt_port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    auto code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto cfg = config_path.empty() ? bench::BenchConfig{} : bench::load_config(config_path);
    if (*gas) return bench_gas(cfg, gas_mode, out);
    if (*latency) {
      if (!n_text.empty()) cfg.n_list = bench::parse_n_list(n_text);
      if (difficulty) cfg.latency.difficulty = *difficulty;
      if (runs) cfg.latency.runs = *runs;
      if (workers) cfg.latency.workers = *workers;
      if (seed) cfg.latency.seed = *seed;
      return bench_latency(cfg, lat_mode, out);
    }
    if (*smartcity) {
      city.revoke = !no_revoke;
      city.mode = contracts::storage_mode_from_string(city_mode);
      if (!dump.empty()) city.dump_chain = dump;
      return bench::run_smartcity(city, std::cout).ok() ? kOk : kAssertion;
    }
    if (*start) return twin_start(cfg, twin_id, chain_dir, resource, fleet_file, host, port, dt_port);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertion;
  }
  return kUsage;
}
