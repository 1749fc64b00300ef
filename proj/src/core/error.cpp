#include "agrihub/core/error.hpp"

namespace agrihub {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_iri: return "malformed-iri";
    case Errc::invalid_literal: return "invalid-literal";
    case Errc::parse_error: return "parse-error";
    case Errc::conflict: return "conflict";
    case Errc::not_found: return "not-found";
    case Errc::validation: return "validation";
    case Errc::precondition: return "precondition";
    case Errc::unknown_format: return "unknown-format";
    case Errc::ambiguous_format: return "ambiguous-format";
    case Errc::truncated: return "truncated";
    case Errc::schema: return "schema";
    case Errc::access_denied: return "access-denied";
    case Errc::unauthenticated: return "unauthenticated";
    case Errc::boundaries_unavailable: return "boundaries-unavailable";
    case Errc::corrupt_journal: return "corrupt-journal";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

Error::Error(Errc code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace agrihub
