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

#include <chrono>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "twinchain/bench/report.hpp"
#include "twinchain/contracts/world.hpp"
#include "twinchain/ledger/network.hpp"

namespace twinchain::bench {

struct LatencyConfig {
  contracts::StorageMode mode{contracts::StorageMode::kVariables};
  std::uint32_t n_twins{1000};
  std::uint32_t difficulty{12};
  std::uint32_t runs{5};
  // 0 submits everything from the aggregator before mining starts.
  std::uint32_t workers{4};
  std::uint64_t seed{1};
  std::uint32_t node_count{3};
  std::uint64_t block_gas_limit{600'000};
};

struct LatencyRun {
  double total_latency_s{0};
  double wall_clock_s{0};
  std::uint64_t blocks{0};
  std::uint64_t hash_attempts{0};
  std::vector<std::uint64_t> inclusion_height;  // per transaction
};

namespace detail {

inline std::vector<contracts::DigitalTwinConfig> bench_configs(const LatencyConfig& c,
                                                               const std::vector<ledger::KeyPair>& settlors,
                                                               const std::vector<ledger::KeyPair>& trustees) {
  std::mt19937_64 rng{c.seed};
  std::uniform_int_distribution<std::int64_t> start{0, 1'000'000};
  std::uniform_int_distribution<std::int64_t> span{3'600, 86'400};
  std::uniform_int_distribution<int> pick{0, 2};
  constexpr std::uint64_t kPeriods[] = {60, 300, 900};
  std::vector<contracts::DigitalTwinConfig> out;
  out.reserve(c.n_twins);
  for (std::uint32_t i = 0; i < c.n_twins; ++i) {
    auto w = i % settlors.size();
    auto s = start(rng);
    contracts::DataView view{kPeriods[pick(rng)], pick(rng) == 0 ? contracts::ViewFormat::kXml
                                                                 : contracts::ViewFormat::kJson};
    out.push_back({"tw-" + std::to_string(c.seed) + "-" + std::to_string(i), settlors[w].address(),
                   trustees[w].address(), s, s + span(rng), view});
  }
  return out;
}

}  // namespace detail

// One run on a fresh network: n set_digital_twin transactions, each timed from
// submission to the round in which its block reached every node (k = 1).
inline LatencyRun run_latency_once(const LatencyConfig& c) {
  using Clock = std::chrono::steady_clock;
  ledger::GenesisConfig g;
  g.chain_id = "twinchain-bench";
  g.difficulty = c.difficulty;
  g.node_count = c.node_count;
  g.confirmations = 1;
  g.block_gas_limit = c.block_gas_limit;
  ledger::Network<contracts::TwinWorld> net{g};
  std::int64_t time = 0;

  auto admin = ledger::KeyPair::from_label("bench-admin");
  auto registry = contracts::contract_address(admin.address(), 0);
  net.submit(0, contracts::deploy_transaction(admin, c.mode, 0));
  while (net.node(0).height() == 0 || net.node(0).mempool_size() > 0) net.mine_round(++time);
  if (auto r = net.node(0).receipt(contracts::deploy_transaction(admin, c.mode, 0).id()); !r || !r->ok()) {
    throw std::logic_error{"latency bench: registry deployment failed"};
  }

  auto lanes = std::max<std::uint32_t>(c.workers, 1);
  std::vector<ledger::KeyPair> settlors, trustees;
  for (std::uint32_t w = 0; w < lanes; ++w) {
    settlors.push_back(ledger::KeyPair::from_label("bench-settlor-" + std::to_string(w)));
    trustees.push_back(ledger::KeyPair::from_label("bench-trustee-" + std::to_string(w)));
  }
  auto configs = detail::bench_configs(c, settlors, trustees);

  std::vector<ledger::Transaction> txs;
  std::unordered_map<Hash256, std::size_t> index;
  std::vector<std::uint64_t> nonce(lanes, 0);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto w = i % lanes;
    txs.push_back(contracts::call_transaction(settlors[w], registry, contracts::SetDigitalTwinCall{configs[i]}, nonce[w]++));
    index.emplace(txs.back().id(), i);
  }

  std::uint64_t attempts_before = 0;
  for (std::size_t i = 0; i < net.size(); ++i) attempts_before += net.node(i).hash_attempts();
  auto height_before = net.node(0).height();

  LatencyRun out;
  out.inclusion_height.assign(txs.size(), 0);
  std::vector<Clock::time_point> submitted(txs.size());
  auto t0 = Clock::now();

  auto submit_lane = [&](std::size_t w) {
    for (auto i = w; i < txs.size(); i += lanes) {
      submitted[i] = Clock::now();
      net.submit(w % net.size(), txs[i]);
    }
  };
  std::vector<std::jthread> workers;
  if (c.workers == 0) {
    submit_lane(0);
  } else {
    for (std::uint32_t w = 0; w < c.workers; ++w) workers.emplace_back(submit_lane, w);
  }

  std::size_t included = 0;
  std::size_t round = 0;
  Clock::time_point last = t0;
  while (included < txs.size()) {
    auto miner = round % net.size();
    net.pump();
    if (net.node(miner).mempool_size() == 0) {
      std::this_thread::yield();
      continue;
    }
    ++round;
    auto block = net.mine_on(miner, ++time);
    if (!block) continue;
    auto now = Clock::now();
    for (const auto& tx : block->transactions) {
      auto it = index.find(tx.id());
      if (it == index.end() || out.inclusion_height[it->second] != 0) continue;
      out.inclusion_height[it->second] = block->height();
      out.total_latency_s += std::chrono::duration<double>(now - submitted[it->second]).count();
      ++included;
      last = now;
    }
  }
  workers.clear();

  out.wall_clock_s = std::chrono::duration<double>(last - t0).count();
  out.blocks = net.node(0).height() - height_before;
  for (std::size_t i = 0; i < net.size(); ++i) out.hash_attempts += net.node(i).hash_attempts();
  out.hash_attempts -= attempts_before;
  return out;
}

// Runs are sequential; the report carries per-run means.
inline LatencyReport run_latency(const LatencyConfig& c) {
  if (c.runs == 0) throw std::invalid_argument{"runs must be at least 1"};
  LatencyReport r{c.mode, c.n_twins, 0, 0, c.difficulty, c.runs, 0, 0, 0};
  for (std::uint32_t k = 0; k < c.runs; ++k) {
    auto run = run_latency_once(c);
    r.total_latency_s += run.total_latency_s / c.runs;
    r.blocks += static_cast<double>(run.blocks) / c.runs;
    r.hash_attempts += static_cast<double>(run.hash_attempts) / c.runs;
    r.wall_clock_s += run.wall_clock_s / c.runs;
  }
  r.mean_per_tx_ms = c.n_twins == 0 ? 0 : r.total_latency_s / c.n_twins * 1000.0;
  return r;
}

}  // namespace twinchain::bench
