#include "agrihub/stores/journal.hpp"

#include <fstream>
#include <sstream>

#include "agrihub/core/error.hpp"

namespace agrihub {

JournalWriter::JournalWriter(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  file_.reset(std::fopen(path_.c_str(), "ab"));
  if (!file_) throw Error(Errc::io_error, "cannot open journal " + path_.string());
}

void JournalWriter::append(std::string_view line) {
  std::string buf(line);
  buf.push_back('\n');
  if (std::fwrite(buf.data(), 1, buf.size(), file_.get()) != buf.size() || std::fflush(file_.get()) != 0)
    throw Error(Errc::io_error, "write failed on " + path_.string());
}

void JournalWriter::append(std::span<const std::string> lines) {
  if (lines.empty()) return;
  std::string buf;
  for (const auto& l : lines) {
    buf += l;
    buf.push_back('\n');
  }
  if (std::fwrite(buf.data(), 1, buf.size(), file_.get()) != buf.size() || std::fflush(file_.get()) != 0)
    throw Error(Errc::io_error, "write failed on " + path_.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void replay_journal(const std::filesystem::path& path,
                    const std::function<void(std::string_view line, std::size_t line_no)>& on_line) {
  if (!std::filesystem::exists(path)) return;
  std::string contents = read_file(path);
  std::string_view rest = contents;
  std::size_t line_no = 0;
  while (!rest.empty()) {
    ++line_no;
    auto nl = rest.find('\n');
    if (nl == std::string_view::npos)
      throw Error(Errc::corrupt_journal, path.string() + ":" + std::to_string(line_no) + ": truncated line");
    auto line = rest.substr(0, nl);
    rest.remove_prefix(nl + 1);
    try {
      on_line(line, line_no);
    } catch (const std::exception& e) {
      throw Error(Errc::corrupt_journal, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace agrihub
