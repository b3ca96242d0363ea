#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "support/twin_fixture.hpp"
#include "twinchain/gateway/http.hpp"

using namespace twinchain;
using namespace twinchain::gateway;
using contracts::DataView;
using contracts::ViewFormat;
using ledger::KeyPair;
using twinchain::testing::ChainFixture;

namespace {

std::vector<sensors::SensorSample> every(std::int64_t step, std::int64_t from, std::int64_t to, double base = 1.5) {
  std::vector<sensors::SensorSample> out;
  for (auto t = from; t <= to; t += step) out.push_back({"r", t, base + static_cast<double>(t) / 7.0});
  return out;
}

std::shared_ptr<const sensors::VirtualResource> sensor(double base = 123.456, std::int64_t interval = 10) {
  sensors::ResourceSpec s;
  s.resource_id = "meter01";
  s.base = base;
  s.interval = interval;
  return std::make_shared<const sensors::VirtualResource>(s);
}

contracts::DigitalTwinConfig twin(std::string id, const KeyPair& settlor, const KeyPair& trustee, std::int64_t start,
                                  std::int64_t end, std::uint64_t period, ViewFormat f = ViewFormat::kJson) {
  return {std::move(id), settlor.address(), trustee.address(), start, end, DataView{period, f}};
}

struct Scenario {
  ChainFixture chain;
  LogicalClock clock{900};
  KeyPair settlor = KeyPair::from_label("settlor");
  KeyPair alice = KeyPair::from_label("alice");
  KeyPair bob = KeyPair::from_label("bob");
  std::uint64_t nonce = 0;

  void add(const contracts::DigitalTwinConfig& cfg) {
    ASSERT_TRUE(chain.call(settlor, contracts::SetDigitalTwinCall{cfg}).ok());
    ASSERT_TRUE(chain.call(settlor, contracts::RegisterTrustCall{Address{cfg.twin_trustee}, cfg.twin_id}).ok());
  }

  std::shared_ptr<TwinService> service(std::string id, std::shared_ptr<const sensors::VirtualResource> r = sensor()) {
    auto s = std::make_shared<TwinService>(std::move(id), chain.endpoint(), std::move(r), clock);
    s->start();
    return s;
  }

  TrusteeCredential cred(const KeyPair& k, const std::string& twin_id) {
    return make_credential(k, twin_id, nonce++, clock.now());
  }
};

// Endpoint that reports a different twin than the one asked for.
struct TamperedEndpoint : ChainEndpoint {
  std::optional<DigitalTwinConfig> twin_config(std::string_view) override {
    DigitalTwinConfig c;
    c.twin_id = "someone-else";
    return c;
  }
  AccessDecision validate_access(const Address&, std::string_view, std::int64_t) override {
    return contracts::Deny{contracts::DenyReason::kNoTrust};
  }
  std::optional<TrustStructure> trust(std::string_view) override { return std::nullopt; }
};

struct SlowEndpoint : ChainEndpoint {
  explicit SlowEndpoint(DigitalTwinConfig c) : cfg{std::move(c)} {}
  std::optional<DigitalTwinConfig> twin_config(std::string_view) override {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds{50});
    return cfg;
  }
  AccessDecision validate_access(const Address&, std::string_view, std::int64_t) override {
    return contracts::Grant{cfg};
  }
  std::optional<TrustStructure> trust(std::string_view) override { return std::nullopt; }
  DigitalTwinConfig cfg;
  std::atomic<int> calls{0};
};

}  // namespace

TEST(View, DefaultsToJson) {
  EXPECT_EQ(DataView{}.view_format, ViewFormat::kJson);
  auto body = render_view("t", every(60, 0, 120), DataView{60}, {0, 120});
  EXPECT_EQ(nlohmann::json::parse(body).at("format"), "json");
}

TEST(View, EmptyWindowRejected) {
  try {
    (void)render_view("t", {}, DataView{60}, {10, 5});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kEmptyWindow);
  }
}

TEST(View, PeriodFilterMatchesBruteForce) {
  auto samples = every(10, 0, 180);
  ASSERT_EQ(samples.size(), 19u);
  std::vector<ViewSample> expected;
  for (const auto& s : samples) {
    if (s.timestamp % 60 == 0) expected.push_back({s.timestamp, s.value});
  }
  auto got = filter_samples(samples, 60, {0, 180}, 0);
  EXPECT_EQ(got, expected);
  ASSERT_EQ(got.size(), 4u);
  EXPECT_EQ(got[3].t, 180);
}

TEST(View, RenderRoundTripsForRandomInputs) {
  std::mt19937_64 rng{7};
  std::uniform_real_distribution<double> value{-1e6, 1e6};
  for (int round = 0; round < 200; ++round) {
    const auto step = std::uniform_int_distribution<std::int64_t>{1, 30}(rng);
    const auto start = std::uniform_int_distribution<std::int64_t>{-500, 500}(rng);
    const auto len = std::uniform_int_distribution<std::int64_t>{0, 900}(rng);
    const auto period = std::uniform_int_distribution<std::uint64_t>{1, 120}(rng);
    std::vector<sensors::SensorSample> samples;
    for (auto t = start; t <= start + len; t += step) samples.push_back({"r", t, value(rng) * std::pow(10.0, round % 7 - 3)});
    Window w{start + len / 4, start + len};
    for (auto f : {ViewFormat::kJson, ViewFormat::kXml}) {
      DataView view{period, f};
      auto body = render_view("twin-" + std::to_string(round), samples, view, w);
      auto parsed = parse_view(body, f);
      EXPECT_EQ(parsed.samples, filter_samples(samples, period, w, w.start));
      EXPECT_EQ(parsed.window, w);
      EXPECT_EQ(parsed.period, period);
      EXPECT_EQ(parsed.twin_id, "twin-" + std::to_string(round));
      for (const auto& s : parsed.samples) {
        EXPECT_GE(s.t, w.start);
        EXPECT_LE(s.t, w.end);
      }
    }
  }
}

TEST(Message, RoundTripAndRejects) {
  TwinMessage m{MessageType::kConfirmable, MessageCode::kGet, 0xbeef, {1, 2, 3}, std::string{kTalkToDtPath}, {9, 8}};
  auto wire = m.encode();
  EXPECT_EQ(wire[0], 0x43);
  EXPECT_EQ(TwinMessage::decode(wire), m);
  auto r = m.reply(MessageCode::kContent, {7});
  EXPECT_EQ(r.token, m.token);
  EXPECT_EQ(r.message_id, m.message_id);
  m.token.assign(9, 0);
  EXPECT_THROW((void)m.encode(), DecodeError);
  wire.resize(6);
  EXPECT_THROW((void)TwinMessage::decode(wire), DecodeError);
}

TEST(Credential, SignatureWindowAndReplay) {
  auto k = KeyPair::from_label("alice");
  CredentialVerifier v{60};
  auto c = make_credential(k, "twin", 1, 1000);
  EXPECT_EQ(v.verify(c, "twin", 1030), k.address());
  EXPECT_THROW(v.verify(c, "twin", 1030), GatewayError);  // replay
  auto other_twin = make_credential(k, "twin", 2, 1000);
  EXPECT_THROW(v.verify(other_twin, "other", 1000), GatewayError);
  auto stale = make_credential(k, "twin", 3, 900);
  EXPECT_THROW(v.verify(stale, "twin", 1000), GatewayError);
  auto flipped = make_credential(k, "twin", 4, 1000);
  flipped.signature[5] ^= 1;
  EXPECT_THROW(v.verify(flipped, "twin", 1000), GatewayError);

  std::multimap<std::string, std::string> headers;
  put_credential_headers(headers, make_credential(k, "twin", 5, 1000));
  auto back = credential_from_headers([&](const std::string& n) {
    auto it = headers.find(n);
    return it == headers.end() ? std::string{} : it->second;
  });
  EXPECT_EQ(v.verify(back, "twin", 1000), k.address());
}

TEST(Twin, FetchesRegisteredConfigOnlyOnceBuried) {
  Scenario s;
  auto cfg = twin("meter01-a", s.settlor, s.alice, 0, 5000, 60);
  TwinService early{"meter01-a", s.chain.endpoint(), sensor(), s.clock};
  try {
    early.start();
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kUnknownTwin);
  }
  auto tx = contracts::call_transaction(s.settlor, s.chain.registry, contracts::SetDigitalTwinCall{cfg}, 0);
  s.chain.nonces[s.settlor.address()] = 1;
  s.chain.node.submit_transaction(tx);
  s.chain.node.mine_next(++s.chain.time);
  EXPECT_THROW(early.start(), GatewayError);  // one confirmation only
  s.chain.settle();
  early.start();
  EXPECT_EQ(early.config(), cfg);

  TwinService tampered{"meter01-a", std::make_shared<TamperedEndpoint>(), sensor(), s.clock};
  try {
    tampered.start();
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kMismatchedTwin);
  }
  TwinService missing{"x", std::make_shared<ChainDirectory>("/nonexistent-chain-dir"), sensor(), s.clock};
  try {
    missing.start();
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kChainUnreachable);
  }
}

TEST(Twin, CacheRefetchesAfterTtlSingleFlight) {
  KeyPair a = KeyPair::from_label("a"), b = KeyPair::from_label("b");
  auto endpoint = std::make_shared<SlowEndpoint>(twin("t", a, b, 0, 100, 10));
  LogicalClock clock{0};
  TwinService svc{"t", endpoint, sensor(), clock};
  EXPECT_THROW((void)svc.config(), GatewayError);  // not started
  svc.start();
  clock.advance(9);
  (void)svc.config();
  EXPECT_EQ(endpoint->calls.load(), 1);
  clock.advance(1);
  {
    std::vector<std::jthread> callers;
    for (int i = 0; i < 8; ++i) callers.emplace_back([&] { (void)svc.config(); });
  }
  EXPECT_EQ(endpoint->calls.load(), 2);
}

TEST(Twin, GrantedTrusteeGetsPeriodGrid) {
  Scenario s;
  s.add(twin("meter01-a", s.settlor, s.alice, 0, 180, 60));
  s.clock.set(180);
  auto svc = s.service("meter01-a", sensor(20.0, 10));
  auto r = svc->third_party(s.cred(s.alice, "meter01-a"), std::nullopt, std::nullopt);
  ASSERT_EQ(r.status, 200) << r.body;
  auto p = parse_view(r.body, ViewFormat::kJson);
  std::vector<std::int64_t> ts;
  for (const auto& x : p.samples) ts.push_back(x.t);
  EXPECT_EQ(ts, (std::vector<std::int64_t>{0, 60, 120, 180}));
}

TEST(Twin, OtherTenantDeniedWithoutValues) {
  Scenario s;
  s.add(twin("meter01-a", s.settlor, s.alice, 0, 5000, 60));
  auto svc = s.service("meter01-a");
  auto r = svc->third_party(s.cred(s.bob, "meter01-a"), std::nullopt, std::nullopt);
  EXPECT_EQ(r.status, 403);
  EXPECT_EQ(r.deny, contracts::DenyReason::kWrongTrustee);
  EXPECT_EQ(r.body.find("123.456"), std::string::npos);
  EXPECT_FALSE(nlohmann::json::parse(r.body).contains("samples"));

  auto stale = make_credential(s.alice, "meter01-a", 99, s.clock.now() - 61);
  EXPECT_EQ(svc->third_party(stale, std::nullopt, std::nullopt).status, 401);
  auto fresh = s.cred(s.alice, "meter01-a");
  EXPECT_EQ(svc->third_party(fresh, std::nullopt, std::nullopt).status, 200);
  auto replay = svc->third_party(fresh, std::nullopt, std::nullopt);
  EXPECT_EQ(replay.status, 401);
  EXPECT_EQ(replay.body.find("123.456"), std::string::npos);
}

TEST(Twin, RevokingOneTrusteeLeavesOtherPayloadIdentical) {
  Scenario s;
  s.add(twin("meter01-a", s.settlor, s.alice, 0, 900, 60));
  s.add(twin("meter01-b", s.settlor, s.bob, 300, 900, 120, ViewFormat::kXml));
  auto resource = sensor(42.0, 10);
  auto a = s.service("meter01-a", resource);
  auto b = s.service("meter01-b", resource);
  auto before_a = a->third_party(s.cred(s.alice, "meter01-a"), std::nullopt, std::nullopt);
  auto before_b = b->third_party(s.cred(s.bob, "meter01-b"), std::nullopt, std::nullopt);
  ASSERT_EQ(before_a.status, 200);
  ASSERT_EQ(before_b.status, 200);
  EXPECT_NE(before_a.body, before_b.body);
  EXPECT_EQ(before_b.content_type, "application/xml");

  ASSERT_TRUE(s.chain.call(s.settlor, contracts::RevokeTrustCall{"meter01-b"}).ok());
  auto after_a = a->third_party(s.cred(s.alice, "meter01-a"), std::nullopt, std::nullopt);
  auto after_b = b->third_party(s.cred(s.bob, "meter01-b"), std::nullopt, std::nullopt);
  EXPECT_EQ(after_a.body, before_a.body);
  EXPECT_EQ(after_b.status, 403);
  EXPECT_EQ(after_b.deny, contracts::DenyReason::kNoTrust);
  EXPECT_EQ(after_b.body.find("42"), std::string::npos);
}

TEST(Twin, EmittedSamplesStayInsideWindow) {
  Scenario s;
  s.add(twin("w", s.settlor, s.alice, 137, 777, 30));
  s.clock.set(700);
  auto svc = s.service("w", sensor(1.0, 1));
  std::mt19937_64 rng{11};
  std::uniform_int_distribution<std::int64_t> t{-200, 1200};
  for (int i = 0; i < 200; ++i) {
    auto x = t(rng), y = t(rng);
    auto r = svc->third_party(s.cred(s.alice, "w"), std::min(x, y), std::max(x, y));
    ASSERT_EQ(r.status, 200);
    auto p = parse_view(r.body, ViewFormat::kJson);
    for (std::size_t k = 0; k < p.samples.size(); ++k) {
      EXPECT_GE(p.samples[k].t, 137);
      EXPECT_LE(p.samples[k].t, 700);
      if (k > 0) EXPECT_EQ(p.samples[k].t - p.samples[k - 1].t, 30);
    }
  }
  EXPECT_EQ(svc->third_party(s.cred(s.alice, "w"), 50, 10).status, 400);
}

TEST(TwinToTwin, SharedSettlorTrustLinkAndUnauthorized) {
  Scenario s;
  auto other_settlor = KeyPair::from_label("other-settlor");
  s.add(twin("a", s.settlor, s.alice, 0, 900, 60));
  s.add(twin("b", s.settlor, s.bob, 0, 900, 120));
  ASSERT_TRUE(s.chain.call(other_settlor, contracts::SetDigitalTwinCall{twin("c", other_settlor, s.alice, 0, 900, 60)}).ok());
  auto a = s.service("a");
  auto b = s.service("b");
  auto c = s.service("c");
  LoopbackBus bus;
  for (auto& svc : {a, b, c}) bus.attach(svc->twin_id(), [svc](const TwinMessage& m) { return svc->talk_to_dt(m); });
  TwinClient client{bus, RetryPolicy{3, std::chrono::milliseconds{5}, 2}};

  auto view = request_peer_view(client, "b", "a", "b", s.settlor, 1, s.clock.now());
  EXPECT_EQ(parse_view(view, ViewFormat::kJson).twin_id, "b");
  auto composite = compose_views({a->third_party(s.cred(s.alice, "a"), std::nullopt, std::nullopt).body, view});
  EXPECT_EQ(std::count(composite.begin(), composite.end(), '\n'), 2);

  try {
    (void)request_peer_view(client, "a", "c", "a", other_settlor, 2, s.clock.now());
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kUnauthorized);
  }
  // a key that is not the requester's settlor
  EXPECT_THROW((void)request_peer_view(client, "b", "a", "b", s.alice, 3, s.clock.now()), GatewayError);

  // trust on "a" naming c's settlor links them
  ASSERT_TRUE(s.chain.call(s.settlor, contracts::TransferPropertyCall{"a", other_settlor.address()}).ok());
  EXPECT_NO_THROW((void)request_peer_view(client, "a", "c", "a", other_settlor, 4, s.clock.now()));

  const auto attempts_before = bus.attempts("b");
  bus.set_offline("b", true);
  try {
    (void)request_peer_view(client, "b", "a", "b", s.settlor, 5, s.clock.now());
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kPeerUnreachable);
  }
  EXPECT_EQ(bus.attempts("b") - attempts_before, 1u + 3u);

  TwinMessage raw{MessageType::kConfirmable, MessageCode::kGet, 7, {0xaa}, "/coap_api/elsewhere", {}};
  auto reply = a->talk_to_dt(raw);
  EXPECT_EQ(reply.code, MessageCode::kNotFound);
  EXPECT_EQ(reply.token, raw.token);
}

TEST(Http, ServesOnlyTheTwinPaths) {
  Scenario s;
  s.add(twin("meter01-a", s.settlor, s.alice, 0, 900, 60));
  TwinInstance inst{s.service("meter01-a")};
  inst.start();
  httplib::Client cli{"127.0.0.1", inst.http_port()};

  httplib::Headers h;
  put_credential_headers(h, s.cred(s.alice, "meter01-a"));
  auto ok = cli.Get("/http_api/talk_to_third_party?from=0&to=300", h);
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  EXPECT_EQ(parse_view(ok->body, ViewFormat::kJson).samples.size(), 6u);

  auto no_cred = cli.Get("/http_api/talk_to_third_party");
  ASSERT_TRUE(no_cred);
  EXPECT_EQ(no_cred->status, 401);

  for (const char* path : {"/", "/sensor", "/sensors/meter01", "/http_api/resource", "/coap_api/talk_to_dt"}) {
    auto r = cli.Get(path);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 404) << path;
  }

  httplib::Headers settlor_h;
  put_credential_headers(settlor_h, s.cred(s.settlor, "meter01-a"));
  auto bc = cli.Get("/http_api/talk_to_bc", settlor_h);
  ASSERT_TRUE(bc);
  EXPECT_EQ(bc->status, 200);
  EXPECT_EQ(config_from_json(nlohmann::json::parse(bc->body)), inst.service().config());
  httplib::Headers trustee_h;
  put_credential_headers(trustee_h, s.cred(s.alice, "meter01-a"));
  EXPECT_EQ(cli.Get("/http_api/talk_to_bc", trustee_h)->status, 403);

  UdpChannel udp;
  TwinClient client{udp, RetryPolicy{3, std::chrono::milliseconds{200}, 2}};
  auto body = request_peer_view(client, "127.0.0.1:" + std::to_string(inst.dt_port()), "meter01-a", "meter01-a",
                                s.settlor, 77, s.clock.now());
  EXPECT_EQ(parse_view(body, ViewFormat::kJson).twin_id, "meter01-a");

  TwinInstance clash{s.service("meter01-a")};
  try {
    clash.start({inst.http_port(), 0});
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kPortUnavailable);
  }
  TwinInstance unknown{std::make_shared<TwinService>("nope", s.chain.endpoint(), sensor(), s.clock)};
  try {
    unknown.start();
    FAIL();
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.code(), GatewayErrc::kUnknownTwin);
  }
}

TEST(Http, ChainDirectoryEndpointReadsDump) {
  Scenario s;
  s.add(twin("meter01-a", s.settlor, s.alice, 0, 900, 60));
  auto dir = std::filesystem::temp_directory_path() / ("twinchain-gw-" + std::to_string(::getpid()));
  ChainDirectory::write(dir, s.chain.node, s.chain.registry);
  auto ep = std::make_shared<ChainDirectory>(dir);
  auto cfg = ep->twin_config("meter01-a");
  ASSERT_TRUE(cfg);
  EXPECT_EQ(cfg->twin_trustee, s.alice.address());
  EXPECT_TRUE(contracts::granted(ep->validate_access(s.alice.address(), "meter01-a", 10)));
  std::filesystem::remove_all(dir);
}
