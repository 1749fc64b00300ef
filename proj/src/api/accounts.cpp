#include "agrihub/api/accounts.hpp"

#include <openssl/rand.h>

#include <mutex>

#include "agrihub/core/error.hpp"
#include "agrihub/core/hash.hpp"

namespace agrihub::api {

namespace {

constexpr std::pair<Capability, std::string_view> kCapabilityNames[] = {
    {Capability::read_graph, "read-graph"},
    {Capability::read_spatial, "read-spatial"},
    {Capability::read_timeseries, "read-timeseries"},
    {Capability::run_service, "run-service"},
};

nlohmann::json grants_json(const std::vector<Grant>& grants) {
  auto arr = nlohmann::json::array();
  for (const auto& g : grants) arr.push_back(to_json(g));
  return arr;
}

std::vector<Grant> grants_from(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::validation, "grants must be an array");
  std::vector<Grant> out;
  for (const auto& g : j) out.push_back(grant_from_json(g));
  return out;
}

}  // namespace

std::string_view to_string(Capability c) noexcept {
  for (auto [cap, name] : kCapabilityNames)
    if (cap == c) return name;
  return "?";
}

std::optional<Capability> capability_from_string(std::string_view s) noexcept {
  for (auto [cap, name] : kCapabilityNames)
    if (name == s) return cap;
  return std::nullopt;
}

nlohmann::json to_json(const Grant& g) {
  return {{"graphPattern", g.graph_prefix}, {"capability", std::string(to_string(g.capability))}};
}

Grant grant_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("graphPattern") || !j["graphPattern"].is_string() || !j.contains("capability") ||
      !j["capability"].is_string())
    throw Error(Errc::validation, "grant needs string fields graphPattern and capability");
  auto prefix = j["graphPattern"].get<std::string>();
  auto cap = capability_from_string(j["capability"].get<std::string>());
  if (!cap) throw Error(Errc::validation, "unknown capability '" + j["capability"].get<std::string>() + "'");
  if (prefix.empty()) throw Error(Errc::validation, "graphPattern must not be empty");
  for (unsigned char c : prefix)
    if (c <= 0x20 || c == '<' || c == '>' || c == '"')
      throw Error(Errc::validation, "graphPattern contains a character not allowed in IRIs");
  return {std::move(prefix), *cap};
}

std::string random_token() {
  unsigned char bytes[32];
  if (RAND_bytes(bytes, sizeof bytes) != 1) throw Error(Errc::io_error, "random generator failure");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char b : bytes) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

AccountStore::AccountStore(const std::filesystem::path& path) {
  replay_journal(path, [this](std::string_view line, std::size_t) { apply(nlohmann::json::parse(line)); });
  journal_ = std::make_unique<JournalWriter>(path);
}

void AccountStore::apply(const nlohmann::json& event) {
  const auto op = event.at("op").get<std::string>();
  const auto id = event.at("id").get<std::string>();
  if (op == "create") {
    auto hash = event.at("tokenHash").get<std::string>();
    accounts_[id] = ServiceAccount{id, hash, grants_from(event.at("grants"))};
    by_hash_[hash] = id;
  } else if (op == "grants") {
    accounts_.at(id).grants = grants_from(event.at("grants"));
  } else {
    throw Error(Errc::corrupt_journal, "unknown account event '" + op + "'");
  }
}

std::string AccountStore::create(const std::string& service_id, std::vector<Grant> grants,
                                 std::optional<std::string> token) {
  if (service_id.empty()) throw Error(Errc::validation, "serviceId must not be empty");
  std::string secret = token ? *token : random_token();
  if (secret.empty()) throw Error(Errc::validation, "token must not be empty");
  const auto hash = sha256_hex(secret);
  std::unique_lock lock(mutex_);
  if (accounts_.contains(service_id)) throw Error(Errc::conflict, "service '" + service_id + "' exists");
  if (by_hash_.contains(hash)) throw Error(Errc::conflict, "token already in use");
  nlohmann::json event = {{"op", "create"}, {"id", service_id}, {"tokenHash", hash}, {"grants", grants_json(grants)}};
  if (journal_) {
    journal_->append(event.dump());
  }
  apply(event);
  return secret;
}

ServiceAccount AccountStore::set_grants(const std::string& service_id, std::vector<Grant> grants) {
  std::unique_lock lock(mutex_);
  auto it = accounts_.find(service_id);
  if (it == accounts_.end()) throw Error(Errc::not_found, "no service '" + service_id + "'");
  nlohmann::json event = {{"op", "grants"}, {"id", service_id}, {"grants", grants_json(grants)}};
  if (journal_) {
    journal_->append(event.dump());
  }
  it->second.grants = std::move(grants);
  return it->second;
}

const ServiceAccount* AccountStore::find_by_token_locked(std::string_view token) const {
  if (token.empty()) return nullptr;
  auto it = by_hash_.find(sha256_hex(token));
  if (it == by_hash_.end()) return nullptr;
  return &accounts_.at(it->second);
}

std::optional<ServiceAccount> AccountStore::by_token(std::string_view token) const {
  std::shared_lock lock(mutex_);
  const auto* a = find_by_token_locked(token);
  return a ? std::optional(*a) : std::nullopt;
}

std::optional<ServiceAccount> AccountStore::by_id(const std::string& service_id) const {
  std::shared_lock lock(mutex_);
  auto it = accounts_.find(service_id);
  return it == accounts_.end() ? std::nullopt : std::optional(it->second);
}

std::vector<ServiceAccount> AccountStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<ServiceAccount> out;
  for (const auto& [id, a] : accounts_) out.push_back(a);
  return out;
}

bool AccountStore::check(std::string_view token, Capability capability, std::string_view target) const {
  std::shared_lock lock(mutex_);
  const auto* a = find_by_token_locked(token);
  if (!a) return false;
  for (const auto& g : a->grants)
    if (g.capability == capability && target.starts_with(g.graph_prefix)) return true;
  return false;
}

bool AccountStore::has_capability(std::string_view token, Capability capability) const {
  std::shared_lock lock(mutex_);
  const auto* a = find_by_token_locked(token);
  if (!a) return false;
  for (const auto& g : a->grants)
    if (g.capability == capability) return true;
  return false;
}

}  // namespace agrihub::api
