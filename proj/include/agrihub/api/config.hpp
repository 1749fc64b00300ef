#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace agrihub::api {

/// Platform configuration, read from one JSON file:
/// {"data_dir", "fallback_boundaries", "auto_dedup", "admin_token",
///  "dedup_threshold", "vocab_requires_admin"}. Relative paths resolve
/// against the file's directory.
struct Config {
  std::filesystem::path data_dir = "data";
  std::optional<std::filesystem::path> fallback_boundaries;
  bool auto_dedup = false;
  std::string admin_token;
  double dedup_threshold = 0.7;
  bool vocab_requires_admin = false;

  static Config from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static Config load(const std::filesystem::path& file);
};

}  // namespace agrihub::api
