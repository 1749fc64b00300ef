#include "agrihub/wikinormia/registry.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "agrihub/core/error.hpp"
#include "agrihub/core/vocab.hpp"

namespace agrihub::wikinormia {

namespace {

const Iri kFormatClass{"https://agrihub.example/vocab/Format"};
const Iri kClassClass{"https://agrihub.example/vocab/Class"};
const Iri kPropertyClass{"https://agrihub.example/vocab/Property"};
const Iri kStatus{"https://agrihub.example/vocab/status"};
const Iri kVersion{"https://agrihub.example/vocab/version"};
const Iri kDefinedIn{"https://agrihub.example/vocab/definedIn"};
const Iri kParentClass{"https://agrihub.example/vocab/parentClass"};
const Iri kDomain{"https://agrihub.example/vocab/domain"};
const Iri kRangeClass{"https://agrihub.example/vocab/rangeClass"};
const Iri kRangeDatatype{"https://agrihub.example/vocab/rangeDatatype"};
const Iri kCardinality{"https://agrihub.example/vocab/cardinality"};
const Iri kCsvColumn{"https://agrihub.example/vocab/csvColumn"};

void check_internal(const FormatDefinition& def) {
  std::set<Iri> classes, properties;
  for (const auto& c : def.classes) {
    if (!classes.insert(c.class_iri).second)
      throw Error(Errc::validation, "duplicate class IRI " + c.class_iri.str());
    std::set<std::string> columns;
    for (const auto& p : c.properties) {
      if (!properties.insert(p.property).second)
        throw Error(Errc::validation, "duplicate property IRI " + p.property.str());
      if (p.csv_column && !columns.insert(*p.csv_column).second)
        throw Error(Errc::validation, "duplicate csv column '" + *p.csv_column + "' in " + c.class_iri.str());
    }
  }
  for (const auto& c : def.comments)
    if (c.body.empty()) throw Error(Errc::validation, "comment body must not be empty");
}

}  // namespace

std::string_view to_string(Violation::Kind k) noexcept {
  switch (k) {
    case Violation::Kind::missing_required: return "missing-required";
    case Violation::Kind::cardinality: return "cardinality";
    case Violation::Kind::datatype: return "datatype";
  }
  return "datatype";
}

TripleSet definition_triples(const FormatDefinition& def) {
  TripleSet out;
  const Iri& f = def.format;
  out.insert({f, vocab::type, kFormatClass});
  out.insert({f, vocab::label, Literal::string(def.label)});
  out.insert({f, kStatus, Literal::string(std::string(to_string(def.status)))});
  out.insert({f, kVersion, Literal::integer(def.version)});
  for (const auto& c : def.classes) {
    out.insert({c.class_iri, vocab::type, kClassClass});
    out.insert({c.class_iri, kDefinedIn, f});
    if (!c.label.empty()) out.insert({c.class_iri, vocab::label, Literal::string(c.label)});
    if (c.parent_class) out.insert({c.class_iri, kParentClass, *c.parent_class});
    for (const auto& p : c.properties) {
      out.insert({p.property, vocab::type, kPropertyClass});
      out.insert({p.property, kDomain, c.class_iri});
      if (!p.label.empty()) out.insert({p.property, vocab::label, Literal::string(p.label)});
      if (const auto* dt = std::get_if<Datatype>(&p.range))
        out.insert({p.property, kRangeDatatype, Literal::string(std::string(datatype_name(*dt)))});
      else
        out.insert({p.property, kRangeClass, std::get<Iri>(p.range)});
      out.insert({p.property, kCardinality, Literal::string(std::string(to_string(p.cardinality)))});
      if (p.csv_column) out.insert({p.property, kCsvColumn, Literal::string(*p.csv_column)});
    }
  }
  return out;
}

Registry::Registry() = default;
Registry::~Registry() = default;

void Registry::set_mirror(MirrorSink sink) {
  std::unique_lock lock(mutex_);
  mirror_ = std::move(sink);
  for (auto& [iri, e] : entries_) {
    e.mirrored.clear();
    remirror_locked(iri);
  }
}

void Registry::open_journal(const std::filesystem::path& path) {
  std::unique_lock lock(mutex_);
  replay_journal(path, [&](std::string_view line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    auto op = j.at("op").get<std::string>();
    if (op == "draft") create_draft_locked(format_from_json(j.at("definition")));
    else if (op == "finalize") finalize_locked(Iri(j.at("format").get<std::string>()));
    else if (op == "comment") add_comment_locked(Iri(j.at("format").get<std::string>()), comment_from_json(j.at("comment")));
    else throw Error(Errc::parse_error, "unknown registry op '" + op + "'");
  });
  journal_ = std::make_unique<JournalWriter>(path);
}

void Registry::journal(const nlohmann::json& event) {
  if (journal_) journal_->append(event.dump());
}

Iri Registry::create_draft(FormatDefinition def) {
  std::unique_lock lock(mutex_);
  auto json = to_json(def);
  auto iri = create_draft_locked(std::move(def));
  journal({{"op", "draft"}, {"definition", std::move(json)}});
  return iri;
}

Iri Registry::create_draft_locked(FormatDefinition def) {
  if (def.status != Status::draft) throw Error(Errc::precondition, "create_draft expects a draft definition");
  check_internal(def);
  auto& e = entries_[def.format];
  if (e.draft) throw Error(Errc::conflict, "a draft already exists for " + def.format.str());
  def.version = static_cast<int>(e.finals.size()) + 1;
  // Comments live on the entry, not on a frozen definition.
  for (auto& c : def.comments) {
    auto pos = std::upper_bound(e.comments.begin(), e.comments.end(), c,
                                [](const Comment& a, const Comment& b) { return a.timestamp < b.timestamp; });
    e.comments.insert(pos, std::move(c));
  }
  def.comments.clear();
  Iri iri = def.format;
  e.draft = std::move(def);
  remirror_locked(iri);
  return iri;
}

const ConceptClass* Registry::resolve_class_locked(const Iri& cls, const FormatDefinition* within) const {
  if (within)
    if (const auto* c = within->find_class(cls)) return c;
  for (const auto& [iri, e] : entries_) {
    if (e.finals.empty()) continue;
    if (const auto* c = e.finals.back().find_class(cls)) return c;
  }
  return nullptr;
}

int Registry::finalize(const Iri& format) {
  std::unique_lock lock(mutex_);
  int v = finalize_locked(format);
  journal({{"op", "finalize"}, {"format", format.str()}});
  return v;
}

int Registry::finalize_locked(const Iri& format) {
  auto it = entries_.find(format);
  if (it == entries_.end() || !it->second.draft) throw Error(Errc::not_found, "no draft for " + format.str());
  auto& draft = *it->second.draft;
  if (draft.classes.empty()) throw Error(Errc::validation, "a format needs at least one class");
  std::vector<std::string> dangling;
  auto check = [&](const Iri& ref) {
    if (!resolve_class_locked(ref, &draft) &&
        std::find(dangling.begin(), dangling.end(), ref.str()) == dangling.end())
      dangling.push_back(ref.str());
  };
  for (const auto& c : draft.classes) {
    if (c.parent_class) check(*c.parent_class);
    for (const auto& p : c.properties)
      if (const auto* cls = std::get_if<Iri>(&p.range)) check(*cls);
  }
  if (!dangling.empty()) {
    std::string detail = "unresolved class references:";
    for (const auto& d : dangling) detail += " " + d;
    throw Error(Errc::validation, detail);
  }
  FormatDefinition frozen = std::move(draft);
  it->second.draft.reset();
  frozen.status = Status::final;
  frozen.version = static_cast<int>(it->second.finals.size()) + 1;
  it->second.finals.push_back(std::move(frozen));
  remirror_locked(format);
  return it->second.finals.back().version;
}

void Registry::install(FormatDefinition def) {
  std::unique_lock lock(mutex_);
  def.status = Status::draft;
  Iri iri = create_draft_locked(std::move(def));
  finalize_locked(iri);
}

void Registry::remirror_locked(const Iri& format) {
  if (!mirror_) return;
  auto& e = entries_.at(format);
  TripleSet next;
  if (!e.finals.empty()) next = definition_triples(e.finals.back());
  else if (e.draft) next = definition_triples(*e.draft);
  TripleSet added, removed;
  std::set_difference(next.begin(), next.end(), e.mirrored.begin(), e.mirrored.end(),
                      std::inserter(added, added.end()));
  std::set_difference(e.mirrored.begin(), e.mirrored.end(), next.begin(), next.end(),
                      std::inserter(removed, removed.end()));
  e.mirrored = std::move(next);
  if (!added.empty() || !removed.empty()) mirror_(added, removed);
}

FormatDefinition Registry::with_comments(const FormatDefinition& def, const Entry& e) const {
  FormatDefinition out = def;
  out.comments = e.comments;
  return out;
}

FormatDefinition Registry::get_format(const Iri& format, std::optional<int> version) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(format);
  if (it == entries_.end() || it->second.finals.empty()) throw Error(Errc::not_found, "no final format " + format.str());
  const auto& finals = it->second.finals;
  if (!version) return with_comments(finals.back(), it->second);
  if (*version < 1 || *version > static_cast<int>(finals.size()))
    throw Error(Errc::not_found, format.str() + " has no version " + std::to_string(*version));
  return with_comments(finals[static_cast<std::size_t>(*version - 1)], it->second);
}

std::optional<FormatDefinition> Registry::get_draft(const Iri& format) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(format);
  if (it == entries_.end() || !it->second.draft) return std::nullopt;
  return with_comments(*it->second.draft, it->second);
}

bool Registry::is_final(const Iri& format) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(format);
  return it != entries_.end() && !it->second.finals.empty();
}

bool Registry::exists(const Iri& format) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(format);
  return it != entries_.end() && (!it->second.finals.empty() || it->second.draft);
}

std::size_t Registry::add_comment(const Iri& format, Comment comment) {
  std::unique_lock lock(mutex_);
  auto json = to_json(comment);
  auto n = add_comment_locked(format, std::move(comment));
  journal({{"op", "comment"}, {"format", format.str()}, {"comment", std::move(json)}});
  return n;
}

std::size_t Registry::add_comment_locked(const Iri& format, Comment comment) {
  if (comment.body.empty()) throw Error(Errc::validation, "comment body must not be empty");
  auto it = entries_.find(format);
  if (it == entries_.end() || (it->second.finals.empty() && !it->second.draft))
    throw Error(Errc::not_found, "unknown format " + format.str());
  auto& comments = it->second.comments;
  auto pos = std::upper_bound(comments.begin(), comments.end(), comment,
                              [](const Comment& a, const Comment& b) { return a.timestamp < b.timestamp; });
  comments.insert(pos, std::move(comment));
  return comments.size();
}

ValidationReport Registry::validate_instances(const NamedGraph& graph, const Iri& format) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(format);
  if (it == entries_.end() || it->second.finals.empty())
    throw Error(Errc::precondition, format.str() + " is not a final format");
  const FormatDefinition& def = it->second.finals.back();

  // subject -> predicate -> objects
  std::map<Iri, std::map<Iri, std::vector<const Term*>>> facts;
  for (const auto& t : graph.triples) facts[t.subject][t.predicate].push_back(&t.object);

  ValidationReport report;
  for (const auto& cls : def.classes) {
    // Own properties plus those of the direct parent class.
    std::vector<const PropertyDef*> props;
    for (const auto& p : cls.properties) props.push_back(&p);
    if (cls.parent_class)
      if (const auto* parent = resolve_class_locked(*cls.parent_class, &def))
        for (const auto& p : parent->properties) props.push_back(&p);

    for (const auto& [subject, preds] : facts) {
      auto types = preds.find(vocab::type);
      if (types == preds.end()) continue;
      bool typed = std::any_of(types->second.begin(), types->second.end(), [&](const Term* t) {
        const auto* iri = as_iri(*t);
        return iri && *iri == cls.class_iri;
      });
      if (!typed) continue;
      for (const auto* p : props) {
        auto values_it = preds.find(p->property);
        std::size_t count = values_it == preds.end() ? 0 : values_it->second.size();
        if (count == 0 && p->cardinality == Cardinality::required_one) {
          report.violations.push_back({subject, p->property, Violation::Kind::missing_required,
                                       "required property '" + p->label + "' is missing"});
        }
        if (count > 1 && p->cardinality != Cardinality::many) {
          report.violations.push_back({subject, p->property, Violation::Kind::cardinality,
                                       std::to_string(count) + " values for a single-valued property"});
        }
        if (count == 0) continue;
        for (const Term* value : values_it->second) {
          if (const auto* dt = std::get_if<Datatype>(&p->range)) {
            const auto* lit = as_literal(*value);
            if (!lit || lit->datatype() != *dt || !lexical_is_valid(*dt, lit->lexical()))
              report.violations.push_back({subject, p->property, Violation::Kind::datatype,
                                           "expected a " + std::string(datatype_name(*dt)) + " literal"});
          } else if (!as_iri(*value)) {
            report.violations.push_back({subject, p->property, Violation::Kind::datatype,
                                         "expected an IRI of class " + std::get<Iri>(p->range).str()});
          }
        }
      }
    }
  }
  std::sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.instance, a.property, a.kind, a.detail) < std::tie(b.instance, b.property, b.kind, b.detail);
  });
  report.violations.erase(std::unique(report.violations.begin(), report.violations.end()), report.violations.end());
  return report;
}

std::vector<FormatSummary> Registry::list_formats(std::optional<Status> status) const {
  std::shared_lock lock(mutex_);
  std::vector<FormatSummary> out;
  for (const auto& [iri, e] : entries_) {
    if (!e.finals.empty() && (!status || *status == Status::final)) {
      const auto& f = e.finals.back();
      out.push_back({iri, f.label, Status::final, f.version});
    }
    if (e.draft && (!status || *status == Status::draft)) out.push_back({iri, e.draft->label, Status::draft, e.draft->version});
  }
  return out;
}

}  // namespace agrihub::wikinormia
