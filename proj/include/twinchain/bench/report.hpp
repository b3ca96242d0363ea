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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "twinchain/contracts/types.hpp"

namespace twinchain::bench {

class IoFailure : public std::runtime_error {
 public:
  explicit IoFailure(const std::string& what) : std::runtime_error{"io failure: " + what} {}
};

enum class GasOperation : std::uint8_t { kDeploy, kStore };

inline const char* to_string(GasOperation op) { return op == GasOperation::kDeploy ? "deploy" : "store"; }

struct GasReport {
  contracts::StorageMode mode{contracts::StorageMode::kVariables};
  GasOperation operation{GasOperation::kDeploy};
  std::uint64_t gas_used{0};
  // Percentage; only set when the Variables figure for the same operation exists.
  std::optional<double> saving_vs_variables;

  static std::vector<std::string> header() { return {"mode", "operation", "gas_used", "saving_vs_variables"}; }
  [[nodiscard]] std::vector<std::string> cells() const;
};

inline double saving_percent(std::uint64_t logs, std::uint64_t variables) {
  return (1.0 - static_cast<double>(logs) / static_cast<double>(variables)) * 100.0;
}

// Fills saving_vs_variables on every row whose operation has a Variables row.
inline void fill_savings(std::vector<GasReport>& rows) {
  for (auto& r : rows) {
    for (const auto& v : rows) {
      if (v.mode == contracts::StorageMode::kVariables && v.operation == r.operation && v.gas_used > 0) {
        r.saving_vs_variables = saving_percent(r.gas_used, v.gas_used);
      }
    }
  }
}

struct LatencyReport {
  contracts::StorageMode mode{contracts::StorageMode::kVariables};
  std::uint32_t n_twins{0};
  double total_latency_s{0};
  double mean_per_tx_ms{0};
  std::uint32_t difficulty{0};
  std::uint32_t runs{0};
  // Per-run means of the structural counters and of the submit-to-last-inclusion makespan.
  double blocks{0};
  double hash_attempts{0};
  double wall_clock_s{0};

  [[nodiscard]] bool consistent(double tolerance = 0.01) const {
    if (n_twins == 0) return total_latency_s == 0;
    auto product = mean_per_tx_ms / 1000.0 * n_twins;
    return std::abs(product - total_latency_s) <= tolerance * std::max(total_latency_s, 1e-9);
  }

  static std::vector<std::string> header() {
    return {"mode",   "n_twins", "total_latency_s", "mean_per_tx_ms", "difficulty",
            "runs",   "blocks",  "hash_attempts",   "wall_clock_s"};
  }
  [[nodiscard]] std::vector<std::string> cells() const;
};

namespace detail {
inline std::string fixed(double v, int digits) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}
}  // namespace detail

inline std::vector<std::string> GasReport::cells() const {
  return {std::string{contracts::to_string(mode)}, to_string(operation), std::to_string(gas_used),
          saving_vs_variables ? detail::fixed(*saving_vs_variables, 2) : std::string{}};
}

inline std::vector<std::string> LatencyReport::cells() const {
  return {std::string{contracts::to_string(mode)},
          std::to_string(n_twins),
          detail::fixed(total_latency_s, 6),
          detail::fixed(mean_per_tx_ms, 6),
          std::to_string(difficulty),
          std::to_string(runs),
          detail::fixed(blocks, 1),
          detail::fixed(hash_attempts, 1),
          detail::fixed(wall_clock_s, 6)};
}

template <class Row>
std::string to_csv(const std::vector<Row>& rows) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    return out + '\n';
  };
  auto out = line(Row::header());
  for (const auto& r : rows) out += line(r.cells());
  return out;
}

// Writes beside the target and renames over it, so readers never see a partial file.
template <class Row>
void emit_csv(const std::vector<Row>& rows, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out{tmp, std::ios::trunc | std::ios::binary};
    if (!out) throw IoFailure{"cannot open " + tmp.string()};
    out << to_csv(rows);
    out.flush();
    if (!out) throw IoFailure{"cannot write " + tmp.string()};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoFailure{"cannot replace " + path.string()};
  }
}

}  // namespace twinchain::bench
