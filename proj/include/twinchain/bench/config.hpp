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

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twinchain/bench/latency.hpp"
#include "twinchain/contracts/gas.hpp"
#include "twinchain/contracts/types.hpp"

namespace twinchain::contracts {

inline void to_json(nlohmann::json& j, const GasSchedule& s) {
  j = {{"tx_base", s.tx_base},       {"log_base", s.log_base},         {"log_topic", s.log_topic},
       {"log_data_byte", s.log_data_byte}, {"sstore_set", s.sstore_set}, {"sstore_update", s.sstore_update},
       {"deploy_base", s.deploy_base}, {"code_byte", s.code_byte}};
}

inline void from_json(const nlohmann::json& j, GasSchedule& s) {
  GasSchedule d;
  s.tx_base = j.value("tx_base", d.tx_base);
  s.log_base = j.value("log_base", d.log_base);
  s.log_topic = j.value("log_topic", d.log_topic);
  s.log_data_byte = j.value("log_data_byte", d.log_data_byte);
  s.sstore_set = j.value("sstore_set", d.sstore_set);
  s.sstore_update = j.value("sstore_update", d.sstore_update);
  s.deploy_base = j.value("deploy_base", d.deploy_base);
  s.code_byte = j.value("code_byte", d.code_byte);
  if (!s.valid()) throw std::invalid_argument{"gas schedule entries must be positive"};
}

}  // namespace twinchain::contracts

namespace twinchain::bench {

// Contents of the --config file. Every key is optional; flags override it.
//
//   {"gas": {...GasSchedule}, "latency": {"n": [1000, 2000], "difficulty": 12, "runs": 5,
//    "workers": 4, "seed": 1, "node_count": 3, "block_gas_limit": 600000},
//    "resources": [...ResourceSpec]}
struct BenchConfig {
  contracts::GasSchedule schedule;
  std::vector<std::uint32_t> n_list{1000, 2000, 3000, 4000, 5000};
  LatencyConfig latency;
  nlohmann::json resources = nlohmann::json::array();
};

inline BenchConfig parse_config(const nlohmann::json& j) {
  BenchConfig c;
  if (j.contains("gas")) c.schedule = j.at("gas").get<contracts::GasSchedule>();
  if (j.contains("latency")) {
    const auto& l = j.at("latency");
    if (l.contains("n")) c.n_list = l.at("n").get<std::vector<std::uint32_t>>();
    c.latency.difficulty = l.value("difficulty", c.latency.difficulty);
    c.latency.runs = l.value("runs", c.latency.runs);
    c.latency.workers = l.value("workers", c.latency.workers);
    c.latency.seed = l.value("seed", c.latency.seed);
    c.latency.node_count = l.value("node_count", c.latency.node_count);
    c.latency.block_gas_limit = l.value("block_gas_limit", c.latency.block_gas_limit);
  }
  if (j.contains("resources")) c.resources = j.at("resources");
  if (!c.resources.is_array()) throw std::invalid_argument{"resources must be an array"};
  return c;
}

inline BenchConfig load_config(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw std::invalid_argument{"cannot open config " + path};
  return parse_config(nlohmann::json::parse(in));
}

// "1000..5000" (step 1000), "1000..5000:500", or "1000,3000".
inline std::vector<std::uint32_t> parse_n_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    auto v = std::stoul(s, &used);
    if (used != s.size() || v == 0) throw std::invalid_argument{"bad twin count '" + s + "'"};
    return static_cast<std::uint32_t>(v);
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    auto colon = text.find(':', dots);
    auto lo = num(text.substr(0, dots));
    auto hi = num(text.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
    auto step = colon == std::string::npos ? 1000u : num(text.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument{"empty range " + text};
    for (auto n = lo; n <= hi; n += step) out.push_back(n);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    out.push_back(num(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace twinchain::bench
