#include "agrihub/api/config.hpp"

#include "agrihub/core/error.hpp"
#include "agrihub/stores/journal.hpp"

namespace agrihub::api {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Config Config::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(Errc::validation, "config must be a JSON object");
  Config c;
  try {
    if (j.contains("data_dir")) c.data_dir = resolve(base_dir, j.at("data_dir").get<std::string>());
    else c.data_dir = resolve(base_dir, "data");
    if (j.contains("fallback_boundaries") && !j.at("fallback_boundaries").is_null())
      c.fallback_boundaries = resolve(base_dir, j.at("fallback_boundaries").get<std::string>());
    c.auto_dedup = j.value("auto_dedup", false);
    c.admin_token = j.value("admin_token", std::string());
    c.dedup_threshold = j.value("dedup_threshold", 0.7);
    c.vocab_requires_admin = j.value("vocab_requires_admin", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::validation, std::string("config: ") + e.what());
  }
  if (c.admin_token.empty()) throw Error(Errc::validation, "config: admin_token must be set");
  if (!(c.dedup_threshold > 0 && c.dedup_threshold <= 1))
    throw Error(Errc::validation, "config: dedup_threshold must lie in (0, 1]");
  return c;
}

Config Config::load(const std::filesystem::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::validation, "config " + file.string() + ": " + e.what());
  }
  return from_json(j, file.parent_path());
}

}  // namespace agrihub::api
