#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "twinchain/sensors/sensor.hpp"

using namespace twinchain::sensors;

namespace {

ResourceSpec spec(std::string id, Waveform w, std::int64_t interval = 10, std::uint64_t seed = 7) {
  ResourceSpec s;
  s.resource_id = std::move(id);
  s.waveform = w;
  s.base = 20.0;
  s.amplitude = 2.5;
  s.interval = interval;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Sensor, ConstantReadsBase) {
  VirtualResource r{spec("c", Waveform::kConstant)};
  for (const auto& s : r.read_window(0, 1000)) EXPECT_EQ(s.value, 20.0);
}

TEST(Sensor, SameSeedSameStream) {
  VirtualResource a{spec("a", Waveform::kRandomWalk, 1, 42)};
  VirtualResource b{spec("b", Waveform::kRandomWalk, 1, 42)};
  VirtualResource c{spec("c", Waveform::kRandomWalk, 1, 43)};
  auto sa = a.read_window(0, 99);
  auto sb = b.read_window(0, 99);
  ASSERT_EQ(sa.size(), 100u);
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_EQ(sa[i].value, sb[i].value);
  EXPECT_NE(sa.back().value, c.read_window(99, 99).front().value);
  // order of reads does not change values
  VirtualResource d{spec("d", Waveform::kRandomWalk, 1, 42)};
  EXPECT_EQ(d.read_window(50, 50).front().value, sa[50].value);
}

TEST(Sensor, WindowTickCounts) {
  VirtualResource r{spec("s", Waveform::kSinusoid, 10)};
  auto w = r.read_window(0, 50);
  ASSERT_EQ(w.size(), 50u / 10u + 1u);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w[i].timestamp, static_cast<std::int64_t>(10 * i));
  EXPECT_EQ(r.read_window(30, 30).size(), 1u);
  EXPECT_TRUE(r.read_window(31, 39).empty());
  EXPECT_EQ(r.read_window(-25, 5).size(), 3u);  // -20, -10, 0
  try {
    (void)r.read_window(10, 9);
    FAIL();
  } catch (const SensorError& e) {
    EXPECT_EQ(e.code(), SensorErrc::kBadWindow);
  }
}

TEST(Sensor, WindowPropertyAgainstBruteForce) {
  for (std::int64_t interval : {1, 3, 7, 60}) {
    auto s = spec("p", Waveform::kSinusoid, interval);
    s.origin = 13;
    VirtualResource r{s};
    for (std::int64_t from = -40; from < 40; from += 3) {
      for (std::int64_t to = from; to < from + 90; to += 11) {
        std::vector<std::int64_t> expected;
        for (auto t = from; t <= to; ++t) {
          if (((t - 13) % interval + interval) % interval == 0) expected.push_back(t);
        }
        auto got = r.read_window(from, to);
        ASSERT_EQ(got.size(), expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].timestamp, expected[i]);
      }
    }
  }
}

TEST(Sensor, RandomWalkStaysFiniteOverMillionTicks) {
  VirtualResource r{spec("w", Waveform::kRandomWalk, 1, 99)};
  auto w = r.read_window(0, 999'999);
  ASSERT_EQ(w.size(), 1'000'000u);
  for (const auto& s : w) ASSERT_TRUE(std::isfinite(s.value));
}

TEST(Sensor, ConcurrentReadsAgree) {
  VirtualResource r{spec("w", Waveform::kRandomWalk, 1, 5)};
  std::vector<std::vector<SensorSample>> results(4);
  {
    std::vector<std::jthread> readers;
    for (int i = 0; i < 4; ++i) readers.emplace_back([&, i] { results[i] = r.read_window(0, 20'000 + i); });
  }
  for (int i = 1; i < 4; ++i) {
    for (std::size_t k = 0; k <= 20'000; ++k) ASSERT_EQ(results[i][k].value, results[0][k].value);
  }
}

TEST(Fleet, SpawnRejectsDuplicateAndBadSpec) {
  Fleet f;
  f.spawn(spec("meter", Waveform::kConstant));
  try {
    f.spawn(spec("meter", Waveform::kSinusoid));
    FAIL();
  } catch (const SensorError& e) {
    EXPECT_EQ(e.code(), SensorErrc::kDuplicateId);
  }
  EXPECT_THROW(f.spawn(spec("zero", Waveform::kConstant, 0)), SensorError);
  EXPECT_THROW((void)f.find("nope"), SensorError);
  EXPECT_EQ(f.size(), 1u);
}

TEST(Fleet, LoadsFromJson) {
  auto j = nlohmann::json::parse(R"([
    {"resource_id": "meter01", "waveform": "random-walk", "base": 100, "amplitude": 0.5, "interval": 10, "seed": 3,
     "unit": "kWh"},
    {"resource_id": "temp01", "waveform": "sinusoid", "base": 21, "amplitude": 4, "interval": 60, "period": 86400}
  ])");
  Fleet f;
  load_fleet(f, j);
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.find("meter01")->spec().unit, "kWh");
  EXPECT_EQ(f.find("temp01")->spec().period, 86400);
  nlohmann::json back = f.find("meter01")->spec();
  EXPECT_EQ(back.get<ResourceSpec>(), f.find("meter01")->spec());
}
