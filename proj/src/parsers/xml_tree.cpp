#include "agrihub/parsers/xml_tree.hpp"

#include <expat.h>

#include <memory>

#include "agrihub/core/error.hpp"

namespace agrihub::parsers {

const std::string* XmlElement::attr(std::string_view key) const noexcept {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  XmlElement root;
  std::vector<XmlElement*> stack;
  bool have_root = false;
  std::string failure;

  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<Builder*>(data);
    if (self->stack.size() >= kMaxXmlDepth) {
      self->failure = "element nesting deeper than " + std::to_string(kMaxXmlDepth);
      XML_StopParser(self->parser, XML_FALSE);
      return;
    }
    XmlElement el;
    el.name = name;
    el.byte_offset = static_cast<std::size_t>(XML_GetCurrentByteIndex(self->parser));
    for (int i = 0; attrs[i]; i += 2) el.attributes.emplace_back(attrs[i], attrs[i + 1]);
    if (self->stack.empty()) {
      self->root = std::move(el);
      self->have_root = true;
      self->stack.push_back(&self->root);
    } else {
      auto& kids = self->stack.back()->children;
      kids.push_back(std::move(el));
      self->stack.push_back(&kids.back());
    }
  }

  static void on_end(void* data, const XML_Char*) { static_cast<Builder*>(data)->stack.pop_back(); }
};

struct ParserFree {
  void operator()(XML_Parser p) const noexcept { XML_ParserFree(p); }
};

}  // namespace

XmlElement parse_xml(std::string_view bytes) {
  std::unique_ptr<XML_ParserStruct, ParserFree> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error(Errc::io_error, "cannot allocate XML parser");
  Builder b;
  b.parser = parser.get();
  XML_SetUserData(parser.get(), &b);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  // Feed in chunks: expat's length parameter is an int.
  constexpr std::size_t kChunk = 1 << 20;
  std::size_t pos = 0;
  do {
    std::size_t n = std::min(kChunk, bytes.size() - pos);
    bool last = pos + n == bytes.size();
    if (XML_Parse(parser.get(), bytes.data() + pos, static_cast<int>(n), last) == XML_STATUS_ERROR) {
      auto offset = XML_GetCurrentByteIndex(parser.get());
      std::string msg = b.failure.empty() ? XML_ErrorString(XML_GetErrorCode(parser.get())) : b.failure;
      throw Error(Errc::parse_error, "malformed XML at byte offset " + std::to_string(offset) + ": " + msg);
    }
    pos += n;
  } while (pos < bytes.size());
  if (!b.have_root) throw Error(Errc::parse_error, "malformed XML at byte offset 0: no root element");
  return std::move(b.root);
}

}  // namespace agrihub::parsers
