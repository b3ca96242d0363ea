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

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"
#include "twinchain/contracts/types.hpp"
#include "twinchain/gateway/error.hpp"
#include "twinchain/sensors/sensor.hpp"

namespace twinchain::gateway {

struct Window {
  std::int64_t start{0};
  std::int64_t end{0};
  friend bool operator==(const Window&, const Window&) = default;
};

struct ViewSample {
  std::int64_t t{0};
  double v{0};
  friend bool operator==(const ViewSample&, const ViewSample&) = default;
};

struct DataViewPayload {
  std::string twin_id;
  contracts::ViewFormat format{contracts::kDefaultViewFormat};
  std::uint64_t period{0};
  Window window;
  std::vector<ViewSample> samples;

  friend bool operator==(const DataViewPayload&, const DataViewPayload&) = default;
};

// Keeps samples on the period grid anchored at `anchor` that fall inside the window.
inline std::vector<ViewSample> filter_samples(const std::vector<sensors::SensorSample>& samples, std::uint64_t period,
                                              Window window, std::int64_t anchor) {
  if (window.start > window.end) throw GatewayError{GatewayErrc::kEmptyWindow};
  if (period == 0) throw GatewayError{GatewayErrc::kBadView, "zero period"};
  const auto p = static_cast<std::int64_t>(period);
  std::vector<ViewSample> out;
  for (const auto& s : samples) {
    if (s.timestamp < window.start || s.timestamp > window.end) continue;
    if (((s.timestamp - anchor) % p + p) % p != 0) continue;
    out.push_back({s.timestamp, s.value});
  }
  return out;
}

namespace detail {
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, end};
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw GatewayError{GatewayErrc::kBadView, "bad number " + s};
  return v;
}

inline std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw GatewayError{GatewayErrc::kBadView, "bad integer " + s};
  return v;
}
}  // namespace detail

// JSON: {"twin_id","format","period","window":{"start","end"},"samples":[{"t","v"}]}
// XML:  <view twin_id= format= period= start= end=><sample t= v=/>...</view>
inline std::string render_payload(const DataViewPayload& p) {
  if (p.format == contracts::ViewFormat::kJson) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : p.samples) samples.push_back({{"t", s.t}, {"v", s.v}});
    nlohmann::json j{{"twin_id", p.twin_id},
                     {"format", contracts::to_string(p.format)},
                     {"period", p.period},
                     {"window", {{"start", p.window.start}, {"end", p.window.end}}},
                     {"samples", std::move(samples)}};
    return j.dump();
  }
  boost::property_tree::ptree view;
  view.put("<xmlattr>.twin_id", p.twin_id);
  view.put("<xmlattr>.format", std::string{contracts::to_string(p.format)});
  view.put("<xmlattr>.period", p.period);
  view.put("<xmlattr>.start", p.window.start);
  view.put("<xmlattr>.end", p.window.end);
  for (const auto& s : p.samples) {
    boost::property_tree::ptree sample;
    sample.put("<xmlattr>.t", s.t);
    sample.put("<xmlattr>.v", detail::format_double(s.v));
    view.add_child("sample", sample);
  }
  boost::property_tree::ptree doc;
  doc.add_child("view", view);
  std::ostringstream out;
  boost::property_tree::write_xml(out, doc);
  return out.str();
}

inline std::string render_view(const std::string& twin_id, const std::vector<sensors::SensorSample>& samples,
                               const contracts::DataView& view, Window window, std::int64_t anchor) {
  DataViewPayload p{twin_id, view.view_format, view.streaming_period, window,
                    filter_samples(samples, view.streaming_period, window, anchor)};
  return render_payload(p);
}

inline std::string render_view(const std::string& twin_id, const std::vector<sensors::SensorSample>& samples,
                               const contracts::DataView& view, Window window) {
  return render_view(twin_id, samples, view, window, window.start);
}

inline DataViewPayload parse_view(const std::string& body, contracts::ViewFormat format) {
  DataViewPayload p;
  p.format = format;
  try {
    if (format == contracts::ViewFormat::kJson) {
      auto j = nlohmann::json::parse(body);
      j.at("twin_id").get_to(p.twin_id);
      p.format = contracts::view_format_from_string(j.at("format").get<std::string>());
      j.at("period").get_to(p.period);
      j.at("window").at("start").get_to(p.window.start);
      j.at("window").at("end").get_to(p.window.end);
      for (const auto& s : j.at("samples")) p.samples.push_back({s.at("t").get<std::int64_t>(), s.at("v").get<double>()});
      return p;
    }
    std::istringstream in{body};
    boost::property_tree::ptree doc;
    boost::property_tree::read_xml(in, doc);
    const auto& view = doc.get_child("view");
    const auto& attrs = view.get_child("<xmlattr>");
    p.twin_id = attrs.get<std::string>("twin_id");
    p.format = contracts::view_format_from_string(attrs.get<std::string>("format"));
    p.period = static_cast<std::uint64_t>(detail::parse_int(attrs.get<std::string>("period")));
    p.window = {detail::parse_int(attrs.get<std::string>("start")), detail::parse_int(attrs.get<std::string>("end"))};
    for (const auto& [name, child] : view) {
      if (name != "sample") continue;
      p.samples.push_back({detail::parse_int(child.get<std::string>("<xmlattr>.t")),
                           detail::parse_double(child.get<std::string>("<xmlattr>.v"))});
    }
    return p;
  } catch (const GatewayError&) {
    throw;
  } catch (const std::exception& e) {
    throw GatewayError{GatewayErrc::kBadView, e.what()};
  }
}

}  // namespace twinchain::gateway
