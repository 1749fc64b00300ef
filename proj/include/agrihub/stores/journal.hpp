#pragma once

#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace agrihub {

/// Append-only, LF-terminated line journal. Each append() call writes its
/// lines and flushes before returning.
class JournalWriter {
 public:
  explicit JournalWriter(std::filesystem::path path);

  void append(std::string_view line);
  void append(std::span<const std::string> lines);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  struct Closer {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
  };
  std::filesystem::path path_;
  std::unique_ptr<std::FILE, Closer> file_;
};

/// Calls `on_line(line, line_number)` for each journal line. A missing file
/// is an empty journal. A final line without LF, or any exception thrown
/// by `on_line`, aborts with corrupt-journal naming file and line.
void replay_journal(const std::filesystem::path& path,
                    const std::function<void(std::string_view line, std::size_t line_no)>& on_line);

/// Writes `contents` to a temp file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace agrihub
