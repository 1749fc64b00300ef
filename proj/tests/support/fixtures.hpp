#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "agrihub/api/platform.hpp"
#include "agrihub/parsers/parse_output.hpp"

namespace fixture {

std::filesystem::path path(const std::string& relative);
std::string read(const std::string& relative);

/// TASKDATA.XML with both TLG pairs as siblings.
struct IsoxmlBundle {
  std::string taskdata;
  agrihub::parsers::SiblingFiles siblings;
};
IsoxmlBundle isoxml_bundle();

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

inline constexpr const char* kAdmin = "admin-secret";

agrihub::api::Config config_for(const std::filesystem::path& data_dir,
                                std::optional<std::filesystem::path> fallback = std::nullopt);

/// Little-endian timelog record encoder kept separate from the decoder.
std::string encode_record(std::uint32_t ms, std::uint16_t days, std::optional<std::pair<std::int32_t, std::int32_t>> lat_lon,
                          const std::vector<std::pair<std::uint8_t, std::int32_t>>& dlv);

}  // namespace fixture
