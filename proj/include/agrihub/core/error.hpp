#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agrihub {

enum class Errc {
  malformed_iri,
  invalid_literal,
  parse_error,
  conflict,
  not_found,
  validation,
  precondition,
  unknown_format,
  ambiguous_format,
  truncated,
  schema,
  access_denied,
  unauthenticated,
  boundaries_unavailable,
  corrupt_journal,
  io_error,
};

/// Stable wire name of an error code, e.g. "access-denied".
std::string_view to_string(Errc code) noexcept;

/// The one exception type thrown across the library. `detail()` is the
/// human-readable part; `what()` is "<code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace agrihub
