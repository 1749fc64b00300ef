#include "agrihub/parsers/wkt.hpp"

#include <cctype>
#include <charconv>

#include "agrihub/core/error.hpp"
#include "agrihub/core/literal.hpp"
#include "agrihub/parsers/parse_output.hpp"

namespace agrihub::parsers {

namespace {

class WktReader {
 public:
  explicit WktReader(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string keyword() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return to_lower_ascii(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  double number() {
    skip_space();
    double v = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc() || end == text_.data() + pos_) fail("expected a number");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return v;
  }

  LonLat coord() {
    double lon = number();
    double lat = number();
    return {lon, lat};
  }

  std::vector<LonLat> coord_list() {
    expect('(');
    std::vector<LonLat> out{coord()};
    while (accept(',')) out.push_back(coord());
    expect(')');
    return out;
  }

  void finish() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::parse_error, "WKT: " + what + " at offset " + std::to_string(pos_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

void append_coords(std::string& out, std::span<const LonLat> coords) {
  out += '(';
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ", ";
    out += format_decimal(coords[i].lon) + " " + format_decimal(coords[i].lat);
  }
  out += ')';
}

}  // namespace

Shape parse_wkt(std::string_view text) {
  WktReader r(text);
  const auto kind = r.keyword();
  Shape shape;
  if (kind == "point") {
    r.expect('(');
    shape = Point{r.coord()};
    r.expect(')');
  } else if (kind == "linestring") {
    shape = LineString{r.coord_list()};
  } else if (kind == "polygon") {
    r.expect('(');
    Polygon poly{r.coord_list()};
    if (r.accept(',')) r.fail("polygon holes are not supported");
    r.expect(')');
    shape = std::move(poly);
  } else {
    r.fail(kind.empty() ? "missing geometry keyword" : "unsupported geometry '" + kind + "'");
  }
  r.finish();
  return shape;
}

std::string to_wkt(const Shape& shape) {
  std::string out;
  if (const auto* p = std::get_if<Point>(&shape)) {
    out = "POINT ";
    LonLat at[] = {p->at};
    append_coords(out, at);
  } else if (const auto* l = std::get_if<LineString>(&shape)) {
    out = "LINESTRING ";
    append_coords(out, l->coords);
  } else {
    out = "POLYGON (";
    append_coords(out, std::get<Polygon>(shape).ring);
    out += ')';
  }
  return out;
}

}  // namespace agrihub::parsers
