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
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace twinchain::sensors {

enum class SensorErrc : std::uint8_t { kDuplicateId, kBadWindow, kBadSpec, kUnknownResource };

constexpr std::string_view to_string(SensorErrc e) {
  switch (e) {
    case SensorErrc::kDuplicateId: return "DuplicateId";
    case SensorErrc::kBadWindow: return "BadWindow";
    case SensorErrc::kBadSpec: return "BadSpec";
    case SensorErrc::kUnknownResource: return "UnknownResource";
  }
  return "Unknown";
}

class SensorError : public std::runtime_error {
 public:
  SensorError(SensorErrc code, const std::string& detail = {})
      : std::runtime_error{detail.empty() ? std::string{to_string(code)} : std::string{to_string(code)} + ": " + detail},
        code_{code} {}
  [[nodiscard]] SensorErrc code() const noexcept { return code_; }

 private:
  SensorErrc code_;
};

enum class Waveform : std::uint8_t { kConstant, kSinusoid, kRandomWalk };

NLOHMANN_JSON_SERIALIZE_ENUM(Waveform, {
                                           {Waveform::kConstant, "constant"},
                                           {Waveform::kSinusoid, "sinusoid"},
                                           {Waveform::kRandomWalk, "random-walk"},
                                       })

struct SensorSample {
  std::string resource_id;
  std::int64_t timestamp{0};
  double value{0};

  friend bool operator==(const SensorSample&, const SensorSample&) = default;
};

// Ticks fall at origin + k * interval. The random walk starts at `origin`
// and keeps every generated step, so place origin near the windows you read.
struct ResourceSpec {
  std::string resource_id;
  Waveform waveform{Waveform::kConstant};
  double base{0};
  double amplitude{0};
  std::int64_t interval{1};
  std::uint64_t seed{0};
  std::int64_t origin{0};
  std::int64_t period{3600};  // sinusoid only
  std::string unit;

  void validate() const {
    if (resource_id.empty()) throw SensorError{SensorErrc::kBadSpec, "empty resource_id"};
    if (interval <= 0) throw SensorError{SensorErrc::kBadSpec, "interval must be positive"};
    if (period <= 0) throw SensorError{SensorErrc::kBadSpec, "period must be positive"};
    if (!std::isfinite(base) || !std::isfinite(amplitude)) throw SensorError{SensorErrc::kBadSpec, "non-finite value"};
  }

  friend bool operator==(const ResourceSpec&, const ResourceSpec&) = default;
};

inline void to_json(nlohmann::json& j, const ResourceSpec& s) {
  j = {{"resource_id", s.resource_id}, {"waveform", s.waveform}, {"base", s.base},     {"amplitude", s.amplitude},
       {"interval", s.interval},       {"seed", s.seed},         {"origin", s.origin}, {"period", s.period},
       {"unit", s.unit}};
}

inline void from_json(const nlohmann::json& j, ResourceSpec& s) {
  ResourceSpec d;
  j.at("resource_id").get_to(s.resource_id);
  s.waveform = j.value("waveform", d.waveform);
  s.base = j.value("base", d.base);
  s.amplitude = j.value("amplitude", d.amplitude);
  s.interval = j.value("interval", d.interval);
  s.seed = j.value("seed", d.seed);
  s.origin = j.value("origin", d.origin);
  s.period = j.value("period", d.period);
  s.unit = j.value("unit", d.unit);
}

namespace detail {
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }
}  // namespace detail

class VirtualResource {
 public:
  explicit VirtualResource(ResourceSpec spec) : spec_{std::move(spec)} {
    spec_.validate();
    if (spec_.waveform == Waveform::kRandomWalk) walk_.assign(1, spec_.base);
  }

  [[nodiscard]] const ResourceSpec& spec() const { return spec_; }
  [[nodiscard]] const std::string& id() const { return spec_.resource_id; }

  // Value at tick index k (timestamp origin + k * interval).
  [[nodiscard]] double value_at_tick(std::int64_t k) const {
    switch (spec_.waveform) {
      case Waveform::kConstant: return spec_.base;
      case Waveform::kSinusoid: {
        const double t = static_cast<double>(k * spec_.interval);
        return spec_.base + spec_.amplitude * std::sin(2 * std::numbers::pi * t / static_cast<double>(spec_.period));
      }
      case Waveform::kRandomWalk: return k <= 0 ? spec_.base : walk(static_cast<std::size_t>(k));
    }
    return spec_.base;
  }

  [[nodiscard]] std::vector<SensorSample> read_window(std::int64_t from, std::int64_t to) const {
    if (from > to) throw SensorError{SensorErrc::kBadWindow};
    const auto first = detail::ceil_div(from - spec_.origin, spec_.interval);
    const auto last = detail::floor_div(to - spec_.origin, spec_.interval);
    std::vector<SensorSample> out;
    if (last < first) return out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    if (spec_.waveform == Waveform::kRandomWalk && last > 0) walk(static_cast<std::size_t>(last));
    for (auto k = first; k <= last; ++k) {
      out.push_back({spec_.resource_id, spec_.origin + k * spec_.interval, value_at_tick(k)});
    }
    return out;
  }

 private:
  double walk(std::size_t k) const {
    {
      std::shared_lock lock{mu_};
      if (k < walk_.size()) return walk_[k];
    }
    std::unique_lock lock{mu_};
    if (!rng_) rng_ = std::make_unique<std::mt19937_64>(spec_.seed);
    std::normal_distribution<double> step{0.0, 1.0};
    walk_.reserve(k + 1);
    while (walk_.size() <= k) walk_.push_back(walk_.back() + spec_.amplitude * step(*rng_));
    return walk_[k];
  }

  ResourceSpec spec_;
  mutable std::shared_mutex mu_;
  mutable std::unique_ptr<std::mt19937_64> rng_;
  mutable std::vector<double> walk_;
};

// The resource population of one deployment. Only twins hold a Fleet.
class Fleet {
 public:
  std::shared_ptr<const VirtualResource> spawn(ResourceSpec spec) {
    auto r = std::make_shared<const VirtualResource>(std::move(spec));
    std::lock_guard lock{mu_};
    if (!resources_.emplace(r->id(), r).second) throw SensorError{SensorErrc::kDuplicateId, r->id()};
    return r;
  }

  [[nodiscard]] std::shared_ptr<const VirtualResource> find(std::string_view id) const {
    std::lock_guard lock{mu_};
    auto it = resources_.find(std::string{id});
    if (it == resources_.end()) throw SensorError{SensorErrc::kUnknownResource, std::string{id}};
    return it->second;
  }

  [[nodiscard]] std::size_t size() const {
    std::lock_guard lock{mu_};
    return resources_.size();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const VirtualResource>> resources_;
};

inline void load_fleet(Fleet& fleet, const nlohmann::json& specs) {
  for (const auto& s : specs) fleet.spawn(s.get<ResourceSpec>());
}

}  // namespace twinchain::sensors
