#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fixture {

std::filesystem::path path(const std::string& relative) {
  return std::filesystem::path(AGRIHUB_FIXTURE_DIR) / relative;
}

std::string read(const std::string& relative) {
  std::ifstream in(path(relative), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + relative);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

IsoxmlBundle isoxml_bundle() {
  IsoxmlBundle b{read("isoxml/TASKDATA.XML"), {}};
  for (const char* name : {"TLG00001.XML", "TLG00001.BIN", "TLG00002.XML", "TLG00002.BIN"})
    b.siblings[name] = read(std::string("isoxml/") + name);
  return b;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("agrihub-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

agrihub::api::Config config_for(const std::filesystem::path& data_dir, std::optional<std::filesystem::path> fallback) {
  agrihub::api::Config c;
  c.data_dir = data_dir;
  c.admin_token = kAdmin;
  c.fallback_boundaries = std::move(fallback);
  return c;
}

namespace {

void put(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

std::string encode_record(std::uint32_t ms, std::uint16_t days,
                          std::optional<std::pair<std::int32_t, std::int32_t>> lat_lon,
                          const std::vector<std::pair<std::uint8_t, std::int32_t>>& dlv) {
  std::string out;
  put(out, ms, 4);
  put(out, days, 2);
  if (lat_lon) {
    put(out, static_cast<std::uint32_t>(lat_lon->first), 4);
    put(out, static_cast<std::uint32_t>(lat_lon->second), 4);
  }
  put(out, dlv.size(), 1);
  for (auto [idx, v] : dlv) {
    put(out, idx, 1);
    put(out, static_cast<std::uint32_t>(v), 4);
  }
  return out;
}

}  // namespace fixture
