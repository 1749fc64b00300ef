#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "agrihub/core/triple.hpp"
#include "agrihub/stores/journal.hpp"
#include "agrihub/wikinormia/format.hpp"

namespace agrihub::wikinormia {

struct FormatSummary {
  Iri format;
  std::string label;
  Status status;
  int version;

  friend bool operator==(const FormatSummary&, const FormatSummary&) = default;
};

struct Violation {
  enum class Kind { missing_required, cardinality, datatype };
  Iri instance;
  Iri property;
  Kind kind;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view to_string(Violation::Kind k) noexcept;

struct ValidationReport {
  std::vector<Violation> violations;
  bool conformant() const noexcept { return violations.empty(); }
};

/// Triples describing a definition, as mirrored into the wikinormia graph.
TripleSet definition_triples(const FormatDefinition& def);

/// The format registry: drafts, immutable finals with versions 1..n, and a
/// flat discussion thread per format IRI. Many readers, one writer.
class Registry {
 public:
  /// Receives the triple delta whenever a format's mirrored description
  /// changes.
  using MirrorSink = std::function<void(const TripleSet& added, const TripleSet& removed)>;

  Registry();
  ~Registry();

  /// Enables journaling; replays the journal first.
  void open_journal(const std::filesystem::path& path);
  void set_mirror(MirrorSink sink);

  /// Stores a draft. Throws conflict if a draft already exists under the
  /// IRI, precondition if def.status is final, validation for duplicate
  /// class/property IRIs or csv columns.
  Iri create_draft(FormatDefinition def);
  /// Freezes the draft as the next version. Throws not-found without a
  /// draft, validation listing every dangling class reference.
  int finalize(const Iri& format);
  /// create_draft + finalize, not journaled (built-in formats).
  void install(FormatDefinition def);

  /// Latest final when `version` is empty; throws not-found.
  FormatDefinition get_format(const Iri& format, std::optional<int> version = std::nullopt) const;
  std::optional<FormatDefinition> get_draft(const Iri& format) const;
  bool is_final(const Iri& format) const;
  bool exists(const Iri& format) const;

  std::size_t add_comment(const Iri& format, Comment comment);

  /// Throws precondition when the format has no final version.
  ValidationReport validate_instances(const NamedGraph& graph, const Iri& format) const;

  /// Finals (latest version) and open drafts, ordered by IRI then version.
  std::vector<FormatSummary> list_formats(std::optional<Status> status = std::nullopt) const;

 private:
  struct Entry {
    std::vector<FormatDefinition> finals;  // finals[v - 1]
    std::optional<FormatDefinition> draft;
    std::vector<Comment> comments;
    TripleSet mirrored;
  };

  Iri create_draft_locked(FormatDefinition def);
  int finalize_locked(const Iri& format);
  std::size_t add_comment_locked(const Iri& format, Comment comment);
  const ConceptClass* resolve_class_locked(const Iri& cls, const FormatDefinition* within) const;
  void remirror_locked(const Iri& format);
  FormatDefinition with_comments(const FormatDefinition& def, const Entry& e) const;
  void journal(const nlohmann::json& event);

  mutable std::shared_mutex mutex_;
  std::map<Iri, Entry> entries_;
  MirrorSink mirror_;
  std::unique_ptr<JournalWriter> journal_;
};

}  // namespace agrihub::wikinormia
