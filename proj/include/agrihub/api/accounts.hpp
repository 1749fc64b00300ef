#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agrihub/core/iri.hpp"
#include "agrihub/stores/journal.hpp"

namespace agrihub::api {

enum class Capability { read_graph, read_spatial, read_timeseries, run_service };

std::string_view to_string(Capability c) noexcept;
std::optional<Capability> capability_from_string(std::string_view s) noexcept;

struct Grant {
  std::string graph_prefix;
  Capability capability;
  friend bool operator==(const Grant&, const Grant&) = default;
};

struct ServiceAccount {
  std::string service_id;
  std::string token_hash;  // sha256 hex of the bearer token
  std::vector<Grant> grants;
};

nlohmann::json to_json(const Grant& g);
/// Throws validation for an unknown capability or an empty prefix.
Grant grant_from_json(const nlohmann::json& j);

/// Service accounts keyed by id; tokens are kept only as SHA-256 digests.
class AccountStore {
 public:
  AccountStore() = default;
  /// Replays then journals `path`.
  explicit AccountStore(const std::filesystem::path& path);

  /// Creates an account and returns its bearer token (random unless given).
  /// Throws conflict for a taken id or token.
  std::string create(const std::string& service_id, std::vector<Grant> grants,
                     std::optional<std::string> token = std::nullopt);
  /// Replaces the grant list atomically. Throws not-found.
  ServiceAccount set_grants(const std::string& service_id, std::vector<Grant> grants);

  std::optional<ServiceAccount> by_token(std::string_view token) const;
  std::optional<ServiceAccount> by_id(const std::string& service_id) const;
  std::vector<ServiceAccount> list() const;

  /// True iff the token's account holds a grant with `capability` whose
  /// prefix starts `target`.
  bool check(std::string_view token, Capability capability, std::string_view target) const;
  /// Whether the token holds any grant with `capability`.
  bool has_capability(std::string_view token, Capability capability) const;

 private:
  void apply(const nlohmann::json& event);
  const ServiceAccount* find_by_token_locked(std::string_view token) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, ServiceAccount> accounts_;
  std::map<std::string, std::string> by_hash_;  // token hash -> id
  std::unique_ptr<JournalWriter> journal_;
};

/// 32 random bytes from the OpenSSL CSPRNG, hex encoded.
std::string random_token();

}  // namespace agrihub::api
