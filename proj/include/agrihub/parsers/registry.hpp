#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "agrihub/parsers/parse_output.hpp"
#include "agrihub/wikinormia/registry.hpp"

namespace agrihub::parsers {

/// A file is accepted when its base name matches one of the globs
/// (case-insensitive) and the magic predicate holds.
struct Matcher {
  std::vector<std::string> globs;
  std::function<bool(const ParseInput&)> magic;

  bool accepts(const ParseInput& input) const;
};

using ParserFn = std::function<ParseOutput(const ParseInput&)>;

struct ParserRegistration {
  Iri format;
  Matcher matcher;
  ParserFn parser;
};

bool glob_match(std::string_view pattern, std::string_view name);

class ParserRegistry {
 public:
  explicit ParserRegistry(const wikinormia::Registry& formats) : formats_(formats) {}

  /// Throws not-found for an unknown format, precondition for a draft-only
  /// format, conflict for a second registration.
  void register_parser(ParserRegistration reg);
  bool has_parser(const Iri& format) const;

  /// Throws unknown-format or ambiguous-format (listing the candidates).
  Iri detect_format(const ParseInput& input) const;
  Iri detect_format(std::string_view bytes, std::string_view filename) const;

  /// Throws unknown-format when no parser is registered for `format`.
  ParseOutput parse(const Iri& format, const ParseInput& input) const;

  std::vector<Iri> formats() const;

 private:
  const wikinormia::Registry& formats_;
  mutable std::shared_mutex mutex_;
  std::map<Iri, ParserRegistration> regs_;
};

/// Schema-driven CSV registration: *.csv whose header names every required
/// column. The latest final version of `format` is looked up on each use,
/// so later finalized versions take effect without re-registering.
ParserRegistration csv_registration(const wikinormia::Registry& formats, const Iri& format);

/// ISOXML, GeoJSON boundaries and the NRW CSV parsers.
void register_builtin_parsers(ParserRegistry& parsers, const wikinormia::Registry& formats);

}  // namespace agrihub::parsers
