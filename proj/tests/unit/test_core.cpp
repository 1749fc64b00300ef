#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "agrihub/core/error.hpp"
#include "agrihub/core/hash.hpp"
#include "agrihub/core/iri.hpp"
#include "agrihub/core/literal.hpp"
#include "agrihub/core/ntriples.hpp"
#include "agrihub/core/time.hpp"

using namespace agrihub;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::io_error;
}

const Iri kNs{"https://agrihub.example/id/"};

}  // namespace

TEST(Iri, AcceptsHttpsAndUrn) {
  EXPECT_TRUE(Iri::is_valid("https://agrihub.example/id/x"));
  EXPECT_TRUE(Iri::is_valid("urn:agrihub:graph:file:1"));
  EXPECT_FALSE(Iri::is_valid("http://example.org/x"));
  EXPECT_FALSE(Iri::is_valid(""));
  EXPECT_FALSE(Iri::is_valid("https://a b"));
  EXPECT_FALSE(Iri::is_valid("https://a<b>"));
  EXPECT_FALSE(Iri::is_valid("urn:"));
  EXPECT_FALSE(Iri::is_valid(":x"));
  EXPECT_FALSE(Iri::is_valid(std::string("urn:a\x01", 6)));
  EXPECT_EQ(code_of([] { Iri("not an iri"); }), Errc::malformed_iri);
}

TEST(MintIri, PlainLocalName) {
  EXPECT_EQ(mint_iri(kNs, "field-12").str(), "https://agrihub.example/id/field-12");
}

TEST(MintIri, PercentEncodesUtf8) {
  // 'ü' is U+00FC, UTF-8 C3 BC; the space is 20.
  EXPECT_EQ(mint_iri(kNs, "Acker Süd").str(), "https://agrihub.example/id/Acker%20S%C3%BCd");
}

TEST(MintIri, RejectsEmptyLocalNameAndBadNamespace) {
  EXPECT_EQ(code_of([] { mint_iri(kNs, ""); }), Errc::validation);
  EXPECT_EQ(code_of([] { mint_iri(std::string_view("ftp://x/"), "a"); }), Errc::malformed_iri);
}

TEST(MintIri, DeterministicAndInjective) {
  std::mt19937 rng(7);
  std::set<std::string> locals;
  std::set<std::string> minted;
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    int len = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) s.push_back(static_cast<char>(rng() % 256));
    if (!locals.insert(s).second) continue;
    auto a = mint_iri(kNs, s);
    EXPECT_EQ(a, mint_iri(kNs, s));
    EXPECT_TRUE(minted.insert(a.str()).second) << "collision for local name of length " << s.size();
    EXPECT_EQ(percent_decode(a.str().substr(kNs.str().size())), s);
  }
}

TEST(Literal, LexicalValidation) {
  EXPECT_TRUE(lexical_is_valid(Datatype::integer, "-42"));
  EXPECT_FALSE(lexical_is_valid(Datatype::integer, "4.2"));
  EXPECT_TRUE(lexical_is_valid(Datatype::decimal, "12.5"));
  EXPECT_FALSE(lexical_is_valid(Datatype::decimal, "abc"));
  EXPECT_TRUE(lexical_is_valid(Datatype::boolean, "false"));
  EXPECT_FALSE(lexical_is_valid(Datatype::boolean, "yes"));
  EXPECT_TRUE(lexical_is_valid(Datatype::date_time, "2018-05-01T08:00:00.000Z"));
  EXPECT_FALSE(lexical_is_valid(Datatype::date_time, "2018-05-01T08:00:00Z"));
  EXPECT_EQ(code_of([] { Literal("x", Datatype::integer); }), Errc::invalid_literal);
}

TEST(Literal, DecimalFormatting) {
  EXPECT_EQ(Literal::decimal(12.5).lexical(), "12.5");
  EXPECT_EQ(Literal::decimal(3).lexical(), "3");
  EXPECT_EQ(Literal::decimal(-0.001).lexical(), "-0.001");
  EXPECT_DOUBLE_EQ(*Literal::decimal(0.1).as_number(), 0.1);
}

TEST(Time, DatetimeRoundTrip) {
  EXPECT_EQ(format_datetime(0), "1970-01-01T00:00:00.000Z");
  EXPECT_EQ(format_datetime(kIsobusEpochMs), "1980-01-01T00:00:00.000Z");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    EpochMs ms = static_cast<EpochMs>(rng() % 4'000'000'000'000ULL);
    EXPECT_EQ(parse_datetime(format_datetime(ms)), ms);
  }
  EXPECT_FALSE(parse_datetime("2018-13-01T00:00:00.000Z"));
}

TEST(Hash, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Ntriples, EmptyGraphSerializesToEmptyText) {
  EXPECT_EQ(serialize_triples(NamedGraph{Iri("urn:g"), {}}), "");
}

TEST(Ntriples, SingleIriTriple) {
  NamedGraph g{Iri("urn:g"), {Triple{Iri("urn:s"), Iri("urn:p"), Iri("urn:o")}}};
  EXPECT_EQ(serialize_triples(g), "<urn:s> <urn:p> <urn:o> .\n");
}

TEST(Ntriples, TypedLiteralLine) {
  NamedGraph g{Iri("urn:g"), {Triple{Iri("urn:s"), Iri("urn:p"), Literal::integer(5)}}};
  EXPECT_EQ(serialize_triples(g), "<urn:s> <urn:p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n");
}

TEST(Ntriples, DuplicateLinesCollapse) {
  auto set = parse_triples("<urn:s> <urn:p> <urn:o> .\n<urn:s> <urn:p> <urn:o> .\n");
  EXPECT_EQ(set.size(), 1u);
}

TEST(Ntriples, MissingTerminatorNamesLine) {
  try {
    parse_triples("<urn:s> <urn:p> <urn:o> .\n<urn:s> <urn:p> <urn:o>\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    EXPECT_NE(e.detail().find("line 2"), std::string::npos) << e.detail();
  }
}

TEST(Ntriples, RandomGraphsRoundTripByteStable) {
  std::mt19937 rng(11);
  const std::string alphabet = "ab \"\\\n\tüΩ<>.^@";
  for (int round = 0; round < 200; ++round) {
    NamedGraph g{Iri("urn:g"), {}};
    int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      Iri s("https://agrihub.example/id/s" + std::to_string(rng() % 10));
      Iri p("https://agrihub.example/vocab/p" + std::to_string(rng() % 4));
      Term o = Iri("urn:x:0");
      switch (rng() % 5) {
        case 0: o = Iri("urn:x:" + std::to_string(rng() % 10)); break;
        case 1: o = Literal::integer(static_cast<int>(rng() % 2001) - 1000); break;
        case 2: o = Literal::decimal((static_cast<int>(rng() % 20001) - 10000) / 100.0); break;
        case 3: o = Literal::boolean(rng() % 2); break;
        default: {
          std::string text;
          int len = static_cast<int>(rng() % 8);
          for (int k = 0; k < len; ++k) text += alphabet[rng() % alphabet.size()];
          o = Literal::string(text);
        }
      }
      g.triples.insert({s, p, o});
    }
    auto text = serialize_triples(g);
    EXPECT_EQ(parse_triples(text), g.triples);
    EXPECT_EQ(serialize_triples(NamedGraph{g.graph, parse_triples(text)}), text);
  }
}
