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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twinchain/contracts/call.hpp"
#include "twinchain/contracts/gas.hpp"
#include "twinchain/contracts/storage.hpp"
#include "twinchain/contracts/types.hpp"
#include "twinchain/core/cow.hpp"
#include "twinchain/core/set_digest.hpp"
#include "twinchain/ledger/log.hpp"

namespace twinchain::contracts {

// ---- word packing ----------------------------------------------------------

inline Hash256 text_word(std::string_view s) {
  if (s.size() > kMaxTextBytes) throw ContractError{ContractErrc::kTextTooLong};
  Hash256 w;
  std::copy(s.begin(), s.end(), w.bytes.begin());
  w.bytes[31] = static_cast<std::uint8_t>(s.size());
  return w;
}

inline std::string word_text(const Hash256& w) {
  const auto n = std::min<std::size_t>(w.bytes[31], kMaxTextBytes);
  return {reinterpret_cast<const char*>(w.bytes.data()), n};
}

inline Hash256 i64_word(std::int64_t v) { return word_from_u64(static_cast<std::uint64_t>(v)); }
inline std::int64_t word_i64(const Hash256& w) { return static_cast<std::int64_t>(word_to_u64(w)); }

// Period and format share one word: format in byte 23, period in bytes 24..31.
inline Hash256 view_word(const DataView& v) {
  auto w = word_from_u64(v.streaming_period);
  w.bytes[23] = static_cast<std::uint8_t>(v.view_format);
  return w;
}

inline DataView word_view(const Hash256& w) {
  return {word_to_u64(w), w.bytes[23] == 1 ? ViewFormat::kXml : ViewFormat::kJson};
}

// ---- events ----------------------------------------------------------------

namespace events {
inline constexpr std::string_view kTwinRegistered = "EventDigitalTwinRegistration(address,address,string,int64,int64,uint64,uint8)";
inline constexpr std::string_view kTrustRegistered = "EventTwinAccessRegistration(bytes32,address)";
inline constexpr std::string_view kPropertyTransferred = "EventTwinPropertyTransfer(bytes32,address)";
inline constexpr std::string_view kTrustRevoked = "EventTwinAccessRevocation(bytes32,address)";

inline Hash256 signature(std::string_view decl) { return sha256(decl); }
}  // namespace events

// The twin's hash value, the indexed twin topic of trust events.
inline Hash256 twin_hash(std::string_view twin_id) {
  Sha256 h;
  h.update("twinchain-twin");
  h.update(twin_id);
  return h.finish();
}

// Registry contents as seen through the contract's own events. Logs mode keeps
// one of these as its guard index; readers rebuild one from query_logs.
struct RegistryProjection {
  CowVector<DigitalTwinConfig> farm;
  CowMap<std::string, std::uint64_t> index;
  CowMap<std::string, TrustStructure> trusts;
  CowMap<Hash256, std::string> by_hash;

  [[nodiscard]] std::uint64_t twin_count() const { return farm.size(); }
  [[nodiscard]] std::optional<std::uint64_t> index_of(std::string_view id) const {
    if (const auto* i = index.find(std::string{id})) return *i;
    return std::nullopt;
  }
  [[nodiscard]] DigitalTwinConfig twin(std::uint64_t i) const { return farm[i]; }
  [[nodiscard]] std::optional<TrustStructure> trust(std::string_view id) const {
    if (const auto* t = trusts.find(std::string{id})) return *t;
    return std::nullopt;
  }

  // Unknown or malformed entries are skipped. Twin registration carries
  // [sig, settlor, trustee] plus four data words; trust events carry
  // [sig, twin hash, trustee] and no data, the settlor being the twin's.
  void apply(const ledger::LogEntry& e) {
    if (e.topics.size() != 3) return;
    const auto& sig = e.topics[0];
    if (sig == events::signature(events::kTwinRegistered)) {
      if (e.data.size() != 128) return;
      Hash256 words[4];
      for (int i = 0; i < 4; ++i) words[i] = Hash256::from_view(ByteView{e.data}.subspan(32 * i, 32));
      DigitalTwinConfig cfg{word_text(words[0]),  Address{e.topics[1]}, Address{e.topics[2]},
                            word_i64(words[1]), word_i64(words[2]),   word_view(words[3])};
      index.insert_or_assign(cfg.twin_id, farm.size());
      by_hash.insert_or_assign(twin_hash(cfg.twin_id), cfg.twin_id);
      farm.push_back(std::move(cfg));
      return;
    }
    const auto* id = by_hash.find(e.topics[1]);
    if (!id || !e.data.empty()) return;
    const auto i = *index.find(*id);
    const Address trustee{e.topics[2]};
    if (sig == events::signature(events::kTrustRegistered)) {
      trusts.insert_or_assign(*id, TrustStructure{*id, farm[i].twin_settlor, trustee});
    } else if (sig == events::signature(events::kPropertyTransferred)) {
      if (const auto* t = trusts.find(*id)) {
        auto moved = *t;
        moved.t_trustee = trustee;
        trusts.insert_or_assign(*id, std::move(moved));
      }
      auto cfg = farm[i];
      cfg.twin_trustee = trustee;
      farm.set(i, std::move(cfg));
    } else if (sig == events::signature(events::kTrustRevoked)) {
      trusts.erase(*id);
    }
  }
};

inline RegistryProjection project(const std::vector<ledger::LogEntry>& logs) {
  RegistryProjection p;
  for (const auto& e : logs) p.apply(e);
  return p;
}

// ---- backends --------------------------------------------------------------

struct Effects {
  GasMeter& meter;
  std::vector<ledger::LogEntry>& logs;
  Address self;
};

// Every field lives in a contract storage word.
class VariablesBackend {
 public:
  enum TwinField : std::uint8_t { kId, kSettlor, kTrustee, kStart, kEnd, kView, kTwinFields };
  enum TrustField : std::uint8_t { kTwin, kTrustSettlor, kTrustTrustee, kTrustFields };

  static Hash256 twin_slot(std::uint64_t index, std::uint8_t field) {
    Sha256 h;
    h.update("farm");
    h.update(word_from_u64(index));
    h.update(ByteView{&field, 1});
    return h.finish();
  }
  static Hash256 trust_slot(std::string_view twin_id, std::uint8_t field) {
    Sha256 h;
    h.update("trust");
    h.update(text_word(twin_id));
    h.update(ByteView{&field, 1});
    return h.finish();
  }

  [[nodiscard]] std::uint64_t twin_count() const { return count_; }
  [[nodiscard]] std::optional<std::uint64_t> index_of(std::string_view id) const {
    if (const auto* i = index_.find(std::string{id})) return *i;
    return std::nullopt;
  }

  [[nodiscard]] DigitalTwinConfig twin(std::uint64_t i) const {
    auto at = [&](std::uint8_t f) { return slots_.read(twin_slot(i, f)).value_or(Hash256{}); };
    return {word_text(at(kId)),  Address{at(kSettlor)}, Address{at(kTrustee)},
            word_i64(at(kStart)), word_i64(at(kEnd)),   word_view(at(kView))};
  }

  [[nodiscard]] std::optional<TrustStructure> trust(std::string_view id) const {
    auto twin = slots_.read(trust_slot(id, kTwin));
    if (!twin) return std::nullopt;
    return TrustStructure{word_text(*twin), Address{slots_.read(trust_slot(id, kTrustSettlor)).value_or(Hash256{})},
                          Address{slots_.read(trust_slot(id, kTrustTrustee)).value_or(Hash256{})}};
  }

  void add_twin(const DigitalTwinConfig& c, Effects& fx) {
    const auto i = count_;
    const Hash256 words[kTwinFields] = {text_word(c.twin_id), c.twin_settlor.digest, c.twin_trustee.digest,
                                        i64_word(c.streaming_start), i64_word(c.streaming_end),
                                        view_word(c.streaming_view)};
    for (std::uint8_t f = 0; f < kTwinFields; ++f) store(twin_slot(i, f), words[f], fx);
    index_.insert_or_assign(c.twin_id, i);
    ++count_;
  }

  void add_trust(const TrustStructure& t, Effects& fx) {
    store(trust_slot(t.twin, kTwin), text_word(t.twin), fx);
    store(trust_slot(t.twin, kTrustSettlor), t.t_settlor.digest, fx);
    store(trust_slot(t.twin, kTrustTrustee), t.t_trustee.digest, fx);
  }

  void transfer(const TrustStructure& t, const Address& new_trustee, Effects& fx) {
    store(trust_slot(t.twin, kTrustTrustee), new_trustee.digest, fx);
    store(twin_slot(*index_of(t.twin), kTrustee), new_trustee.digest, fx);
  }

  void revoke(const TrustStructure& t, Effects& fx) {
    for (std::uint8_t f = 0; f < kTrustFields; ++f) {
      if (slots_.clear(trust_slot(t.twin, f))) fx.meter.add(gas_op::SstoreUpdate{});
    }
  }

  [[nodiscard]] Hash256 root() const { return slots_.root(); }
  [[nodiscard]] const SlotStorage& slots() const { return slots_; }

 private:
  void store(const Hash256& key, const Hash256& value, Effects& fx) {
    switch (slots_.write(key, value)) {
      case SlotWrite::kFresh: fx.meter.add(gas_op::SstoreSet{}); break;
      case SlotWrite::kUpdate: fx.meter.add(gas_op::SstoreUpdate{}); break;
      case SlotWrite::kUnchanged: break;
    }
  }

  SlotStorage slots_;
  CowMap<std::string, std::uint64_t> index_;
  std::uint64_t count_{0};
};

// State changes are only emitted as events; guards consult the projection of
// the contract's own event stream.
class LogsBackend {
 public:
  [[nodiscard]] std::uint64_t twin_count() const { return view_.twin_count(); }
  [[nodiscard]] std::optional<std::uint64_t> index_of(std::string_view id) const { return view_.index_of(id); }
  [[nodiscard]] DigitalTwinConfig twin(std::uint64_t i) const { return view_.twin(i); }
  [[nodiscard]] std::optional<TrustStructure> trust(std::string_view id) const { return view_.trust(id); }

  void add_twin(const DigitalTwinConfig& c, Effects& fx) {
    Bytes data;
    for (const auto& w : {text_word(c.twin_id), i64_word(c.streaming_start), i64_word(c.streaming_end),
                          view_word(c.streaming_view)}) {
      data.insert(data.end(), w.bytes.begin(), w.bytes.end());
    }
    emit(signed_topics(events::kTwinRegistered, c.twin_settlor, c.twin_trustee), std::move(data), fx);
  }

  void add_trust(const TrustStructure& t, Effects& fx) {
    emit(trust_topics(events::kTrustRegistered, t.twin, t.t_trustee), {}, fx);
  }

  void transfer(const TrustStructure& t, const Address& new_trustee, Effects& fx) {
    if (new_trustee == t.t_trustee && view_.twin(*view_.index_of(t.twin)).twin_trustee == new_trustee) return;
    emit(trust_topics(events::kPropertyTransferred, t.twin, new_trustee), {}, fx);
  }

  void revoke(const TrustStructure& t, Effects& fx) {
    emit(trust_topics(events::kTrustRevoked, t.twin, t.t_trustee), {}, fx);
  }

  [[nodiscard]] Hash256 root() const {
    Sha256 h;
    h.update(word_from_u64(emitted_));
    h.update(digest_.value());
    return h.finish();
  }
  [[nodiscard]] const RegistryProjection& projection() const { return view_; }

 private:
  static ledger::Topics trust_topics(std::string_view decl, std::string_view twin, const Address& trustee) {
    return {events::signature(decl), twin_hash(twin), trustee.digest};
  }
  static ledger::Topics signed_topics(std::string_view decl, const Address& a, const Address& b) {
    return {events::signature(decl), a.digest, b.digest};
  }

  void emit(ledger::Topics topics, Bytes data, Effects& fx) {
    ledger::LogEntry e{fx.self, topics, std::move(data)};
    fx.meter.add(gas_op::Log{e.topics.size(), e.data.size()});
    Writer w;
    w.u64(emitted_++);
    e.write(w);
    digest_.insert(sha256(w.data()));
    view_.apply(e);
    fx.logs.push_back(std::move(e));
  }

  RegistryProjection view_;
  SetDigest digest_;
  std::uint64_t emitted_{0};
};

// ---- guards ----------------------------------------------------------------

// Guard checks run in the same order for both storage modes; a throw reverts.
template <class Backend>
void apply_call(Backend& b, const Call& call, const Address& caller, Effects& fx) {
  struct Visitor {
    Backend& b;
    const Address& caller;
    Effects& fx;

    void operator()(const DeployCall&) const { throw ContractError{ContractErrc::kBadPayload}; }

    void operator()(const SetDigitalTwinCall& c) const {
      if (c.config.twin_settlor != caller) throw ContractError{ContractErrc::kNotSettlor};
      if (auto e = check_config(c.config)) throw ContractError{*e};
      if (b.index_of(c.config.twin_id)) throw ContractError{ContractErrc::kDuplicateTwin};
      b.add_twin(c.config, fx);
    }

    void operator()(const RegisterTrustCall& c) const {
      const auto cfg = owned(c.twin_id);
      if (c.trustee == cfg.twin_settlor) throw ContractError{ContractErrc::kSettlorIsTrustee};
      if (b.trust(c.twin_id)) throw ContractError{ContractErrc::kDuplicateTrust};
      b.add_trust(TrustStructure{c.twin_id, caller, c.trustee}, fx);
    }

    void operator()(const TransferPropertyCall& c) const {
      const auto cfg = owned(c.twin_id);
      if (c.new_trustee == cfg.twin_settlor) throw ContractError{ContractErrc::kSettlorIsTrustee};
      auto t = b.trust(c.twin_id);
      if (!t) throw ContractError{ContractErrc::kNoActiveTrust};
      b.transfer(*t, c.new_trustee, fx);
    }

    void operator()(const RevokeTrustCall& c) const {
      owned(c.twin_id);
      auto t = b.trust(c.twin_id);
      if (!t) throw ContractError{ContractErrc::kNoActiveTrust};
      b.revoke(*t, fx);
    }

    DigitalTwinConfig owned(std::string_view id) const {
      if (id.size() > kMaxTextBytes) throw ContractError{ContractErrc::kTextTooLong};
      auto i = b.index_of(id);
      if (!i) throw ContractError{ContractErrc::kUnknownTwin};
      auto cfg = b.twin(*i);
      if (cfg.twin_settlor != caller) throw ContractError{ContractErrc::kNotSettlor};
      return cfg;
    }
  };
  std::visit(Visitor{b, caller, fx}, call);
}

template <class Lookup>
AccessDecision decide_access(const Lookup& b, const Address& trustee, std::string_view twin_id, std::int64_t now) {
  auto t = b.trust(twin_id);
  if (!t) return Deny{DenyReason::kNoTrust};
  if (t->t_trustee != trustee) return Deny{DenyReason::kWrongTrustee};
  auto i = b.index_of(twin_id);
  if (!i) return Deny{DenyReason::kNoTrust};
  auto cfg = b.twin(*i);
  if (now < cfg.streaming_start || now > cfg.streaming_end) return Deny{DenyReason::kWindowClosed};
  return Grant{std::move(cfg)};
}

template <class Lookup>
DigitalTwinConfig settlor_read(const Lookup& b, const Address& caller, std::uint64_t index) {
  if (index >= b.twin_count()) throw ContractError{ContractErrc::kIndexOutOfRange};
  auto cfg = b.twin(index);
  if (cfg.twin_settlor != caller) throw ContractError{ContractErrc::kNotSettlor};
  return cfg;
}

// ---- deployable definition -------------------------------------------------

// Declarations that make up the deployed registry. Deploy gas is charged per
// byte of their canonical encoding.
inline std::vector<std::string_view> registry_definition(StorageMode mode) {
  if (mode == StorageMode::kLogs) {
    return {
        "event EventDigitalTwinRegistration(address indexed settlor,address indexed trustee,string twin_id,"
        "int64 start,int64 end,uint64 period,uint8 format)",
        "event EventTwinAccessRegistration(bytes32 indexed twin,address indexed trustee)",
        "event EventTwinPropertyTransfer(bytes32 indexed twin,address indexed trustee)",
        "event EventTwinAccessRevocation(bytes32 indexed twin,address indexed trustee)",
        "function setDigitalTwin(string id,address settlor,address trustee,int64 start,int64 end,uint64 period,"
        "uint8 format){emit EventDigitalTwinRegistration(settlor,trustee,id,start,end,period,format)}",
        "function registerTrust(address trustee,string id){emit EventTwinAccessRegistration(keccak(id),trustee)}",
        "function transferProperty(string id,address trustee){emit EventTwinPropertyTransfer(keccak(id),trustee)}",
        "function revokeTrust(string id,address trustee){emit EventTwinAccessRevocation(keccak(id),trustee)}",
    };
  }
  return {
      "enum ViewFormat{JSON,XML}",
      "struct DataView{uint64 streaming_period;ViewFormat view_format}",
      "struct DigitalTwin{string twin_id;address twin_settlor;address twin_trustee;int64 streaming_start;"
      "int64 streaming_end;DataView streaming_view}",
      "struct TrustStructure{string twin;address t_settlor;address t_trustee}",
      "DigitalTwin[] digital_twins_farm",
      "mapping(string=>TrustStructure) twin_trusts",
      "mapping(string=>uint64) twin_index",
      "modifier onlySettlor(string id){require(digital_twins_farm[twin_index[id]].twin_settlor==msg.sender)}",
      "modifier activeTrust(string id){require(twin_trusts[id].t_trustee!=address(0))}",
      "function setDigitalTwin(DigitalTwin c){require(c.twin_settlor==msg.sender);require(c.streaming_start<="
      "c.streaming_end);twin_index[c.twin_id]=digital_twins_farm.length;digital_twins_farm.push(c)}",
      "function registerTrust(address trustee,string id) onlySettlor(id){require(twin_trusts[id].t_trustee=="
      "address(0));twin_trusts[id]=TrustStructure(id,msg.sender,trustee)}",
      "function transferProperty(string id,address trustee) onlySettlor(id) activeTrust(id){twin_trusts[id]."
      "t_trustee=trustee;digital_twins_farm[twin_index[id]].twin_trustee=trustee}",
      "function revokeTrust(string id) onlySettlor(id) activeTrust(id){delete twin_trusts[id]}",
      "function getDigitalTwin(uint64 index) view returns(DigitalTwin){require(digital_twins_farm[index]."
      "twin_settlor==msg.sender);return digital_twins_farm[index]}",
      "function twinCount() view returns(uint64){return digital_twins_farm.length}",
      "function getTrust(string id) view returns(TrustStructure){return twin_trusts[id]}",
      "function validateAccess(address trustee,string id,int64 now) view returns(bool,uint8){TrustStructure t="
      "twin_trusts[id];if(t.t_trustee==address(0))return(false,0);if(t.t_trustee!=trustee)return(false,1);"
      "DigitalTwin d=digital_twins_farm[twin_index[id]];if(now<d.streaming_start||now>d.streaming_end)"
      "return(false,2);return(true,0)}",
  };
}

inline Bytes registry_definition_bytes(StorageMode mode) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(mode));
  for (auto d : registry_definition(mode)) w.str(d);
  return std::move(w).take();
}

inline std::size_t registry_definition_size(StorageMode mode) { return registry_definition_bytes(mode).size(); }

// ---- registry --------------------------------------------------------------

class Registry {
 public:
  Registry() = default;
  Registry(Address self, StorageMode mode) : self_{self}, mode_{mode} {
    if (mode == StorageMode::kLogs) backend_ = LogsBackend{};
  }

  [[nodiscard]] const Address& address() const { return self_; }
  [[nodiscard]] StorageMode mode() const { return mode_; }

  void apply(const Call& call, const Address& caller, GasMeter& meter, std::vector<ledger::LogEntry>& logs) {
    Effects fx{meter, logs, self_};
    std::visit([&](auto& b) { apply_call(b, call, caller, fx); }, backend_);
  }

  [[nodiscard]] std::uint64_t twin_count() const {
    return std::visit([](const auto& b) { return b.twin_count(); }, backend_);
  }
  [[nodiscard]] DigitalTwinConfig get_digital_twin(const Address& caller, std::uint64_t index) const {
    return std::visit([&](const auto& b) { return settlor_read(b, caller, index); }, backend_);
  }
  [[nodiscard]] AccessDecision validate_access(const Address& trustee, std::string_view twin_id,
                                               std::int64_t now) const {
    return std::visit([&](const auto& b) { return decide_access(b, trustee, twin_id, now); }, backend_);
  }
  [[nodiscard]] Hash256 root() const {
    return std::visit([](const auto& b) { return b.root(); }, backend_);
  }

  [[nodiscard]] const VariablesBackend* variables() const { return std::get_if<VariablesBackend>(&backend_); }
  [[nodiscard]] const LogsBackend* logs() const { return std::get_if<LogsBackend>(&backend_); }

 private:
  Address self_;
  StorageMode mode_{StorageMode::kVariables};
  std::variant<VariablesBackend, LogsBackend> backend_;
};

}  // namespace twinchain::contracts
