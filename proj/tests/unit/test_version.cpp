#include <catch2/catch_amalgamated.hpp>

#include <depsniff/errors.hpp>
#include <depsniff/version.hpp>

#include "support/gen.hpp"
#include "support/oracle.hpp"

using depsniff::compare_versions;
using depsniff::format_version;
using depsniff::ParseError;
using depsniff::parse_version;
using depsniff::SemanticVersion;

TEST_CASE("plain triples parse into components") {
  auto v = parse_version("1.2.3");
  CHECK(v.major == 1);
  CHECK(v.minor == 2);
  CHECK(v.patch == 3);
  CHECK(v.prerelease.empty());
  CHECK(v.build.empty());
}

TEST_CASE("prerelease and build identifiers are split on dots") {
  auto v = parse_version("1.0.0-alpha.1.x-y+exp.sha.5114f85");
  CHECK(v.prerelease == std::vector<std::string>{"alpha", "1", "x-y"});
  CHECK(v.build == std::vector<std::string>{"exp", "sha", "5114f85"});
}

TEST_CASE("a single leading v or = prefix is tolerated") {
  CHECK(parse_version("v1.2.3").major == 1);
  CHECK(parse_version("=1.2.3").major == 1);
  CHECK_THROWS_AS(parse_version("vv1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_version("=v1.2.3"), ParseError);
}

TEST_CASE("malformed versions are rejected with positions") {
  CHECK_THROWS_AS(parse_version(""), ParseError);
  CHECK_THROWS_AS(parse_version("1"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2.3.4"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2.3-"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2.3+"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2.3-a..b"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2.x"), ParseError);
  CHECK_THROWS_AS(parse_version(" 1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_version("1.2.3 "), ParseError);

  try {
    parse_version("1.02.3");
    FAIL("leading zero accepted");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("numeric components reject leading zeros but allow bare zero") {
  CHECK(parse_version("0.0.0").major == 0);
  CHECK_THROWS_AS(parse_version("01.0.0"), ParseError);
  CHECK_THROWS_AS(parse_version("0.0.00"), ParseError);
  // zero-led prerelease identifiers are invalid only when fully numeric
  CHECK(parse_version("1.0.0-0abc").prerelease ==
        std::vector<std::string>{"0abc"});
  CHECK_THROWS_AS(parse_version("1.0.0-01"), ParseError);
}

TEST_CASE("components above the arithmetic cap are rejected") {
  CHECK(parse_version("1000000000000000.0.0").major == 1000000000000000ull);
  CHECK_THROWS_AS(parse_version("1000000000000001.0.0"), ParseError);
}

TEST_CASE("precedence follows the classic ladder") {
  const char* ladder[] = {
      "1.0.0-alpha",      "1.0.0-alpha.1", "1.0.0-alpha.beta",
      "1.0.0-beta",       "1.0.0-beta.2",  "1.0.0-beta.11",
      "1.0.0-rc.1",       "1.0.0",         "2.0.0",
      "2.1.0",            "2.1.1"};
  for (std::size_t i = 0; i + 1 < std::size(ladder); ++i) {
    CAPTURE(ladder[i], ladder[i + 1]);
    CHECK(compare_versions(parse_version(ladder[i]),
                           parse_version(ladder[i + 1])) < 0);
  }
}

TEST_CASE("numeric identifiers order numerically, not lexically") {
  CHECK(compare_versions(parse_version("1.0.0-2"), parse_version("1.0.0-11")) <
        0);
  CHECK(compare_versions(parse_version("1.0.0-9"), parse_version("1.0.0-10")) <
        0);
  // numeric sorts below alphanumeric
  CHECK(compare_versions(parse_version("1.0.0-99"),
                         parse_version("1.0.0-alpha")) < 0);
}

TEST_CASE("build metadata is ignored by precedence but not by equality") {
  auto a = parse_version("1.2.3+one");
  auto b = parse_version("1.2.3+two");
  CHECK(compare_versions(a, b) == 0);
  CHECK_FALSE(a == b);
  CHECK(a == parse_version("1.2.3+one"));
}

TEST_CASE("formatting round-trips the parsed value") {
  for (const char* text :
       {"0.0.0", "1.2.3", "10.20.30", "1.2.3-alpha.1", "1.2.3+build.7",
        "1.2.3-rc.1+sha.abc", "2.0.0-0.3.7"}) {
    CAPTURE(text);
    CHECK(format_version(parse_version(text)) == text);
  }
  // prefix characters are not part of the canonical form
  CHECK(format_version(parse_version("v1.2.3")) == "1.2.3");
  CHECK(format_version(parse_version("=1.2.3")) == "1.2.3");
}

TEST_CASE("comparison agrees with an independent implementation") {
  testgen::Gen gen(7001);
  for (int i = 0; i < 1500; ++i) {
    std::string sa = gen.random_semver();
    std::string sb = gen.random_semver();
    CAPTURE(sa, sb);
    auto a = parse_version(sa);
    auto b = parse_version(sb);
    CHECK(compare_versions(a, b) == oracle::cmp(a, b));
  }
}

TEST_CASE("ordering is total, antisymmetric and transitive") {
  testgen::Gen gen(7002);
  std::vector<SemanticVersion> vs;
  for (int i = 0; i < 60; ++i) vs.push_back(parse_version(gen.random_semver()));
  for (const auto& a : vs)
    for (const auto& b : vs) {
      int ab = compare_versions(a, b);
      int ba = compare_versions(b, a);
      CHECK(ab == -ba);
      if (&a == &b) CHECK(ab == 0);
    }
  for (const auto& a : vs)
    for (const auto& b : vs)
      for (const auto& c : vs) {
        if (compare_versions(a, b) <= 0 && compare_versions(b, c) <= 0)
          CHECK(compare_versions(a, c) <= 0);
      }
}

TEST_CASE("round-trip parse-format-parse is the identity") {
  testgen::Gen gen(7003);
  for (int i = 0; i < 500; ++i) {
    auto v = parse_version(gen.random_semver());
    auto again = parse_version(format_version(v));
    CHECK(v == again);
    CHECK(format_version(again) == format_version(v));
  }
}
