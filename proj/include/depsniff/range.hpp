#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depsniff/errors.hpp"
#include "depsniff/version.hpp"

namespace depsniff {

enum class CmpOp { Eq, Gt, Ge, Lt, Le };

struct Comparator {
  CmpOp op = CmpOp::Eq;
  SemanticVersion version;
};

/// One conjunction: a version must satisfy every comparator in the list.
using Clause = std::vector<Comparator>;

/// Desugared form of an npm range string: a disjunction of conjunctions.
/// Sugar forms (^, ~, x-ranges, hyphen ranges, partial versions) are expanded
/// into primitive comparators at parse time.
struct RangeExpr {
  std::vector<Clause> clauses;
  std::string source_text;
};

inline bool satisfies_comparator(const SemanticVersion& v,
                                 const Comparator& c) {
  int cmp = compare_versions(v, c.version);
  switch (c.op) {
    case CmpOp::Eq: return cmp == 0;
    case CmpOp::Gt: return cmp > 0;
    case CmpOp::Ge: return cmp >= 0;
    case CmpOp::Lt: return cmp < 0;
    case CmpOp::Le: return cmp <= 0;
  }
  return false;
}

/// Conjunction check with the npm prerelease gate: a prerelease version can
/// satisfy a clause only when some comparator in that clause carries a
/// prerelease on the same numeric triple.
inline bool clause_satisfied(const SemanticVersion& v, const Clause& clause) {
  for (const Comparator& c : clause)
    if (!satisfies_comparator(v, c)) return false;
  if (v.has_prerelease()) {
    for (const Comparator& c : clause)
      if (c.version.has_prerelease() && c.version.same_triple(v)) return true;
    return false;
  }
  return true;
}

inline bool satisfies(const SemanticVersion& v, const RangeExpr& r) {
  for (const Clause& clause : r.clauses)
    if (clause_satisfied(v, clause)) return true;
  return false;
}

namespace detail {

// A version fragment where any of the three parts may be a wildcard ("x",
// "X", "*") or omitted entirely.
struct PartialVersion {
  std::optional<std::uint64_t> major;
  std::optional<std::uint64_t> minor;
  std::optional<std::uint64_t> patch;
  std::vector<std::string> prerelease;
  std::vector<std::string> build;
};

inline Comparator make_cmp(CmpOp op, std::uint64_t major, std::uint64_t minor,
                           std::uint64_t patch,
                           std::vector<std::string> prerelease = {}) {
  return Comparator{op, make_version(major, minor, patch, std::move(prerelease))};
}

// Matches nothing: no version orders below the 0.0.0-0 floor.
inline Comparator impossible_cmp() {
  return make_cmp(CmpOp::Lt, 0, 0, 0, {"0"});
}

// Matches every release version (prereleases are held back by the gate).
inline Comparator universal_cmp() { return make_cmp(CmpOp::Ge, 0, 0, 0); }

inline std::optional<std::uint64_t> parse_part(std::string_view text,
                                               std::size_t base,
                                               std::size_t& pos) {
  if (pos < text.size() &&
      (text[pos] == 'x' || text[pos] == 'X' || text[pos] == '*')) {
    ++pos;
    return std::nullopt;
  }
  return parse_numeric_component(text, base, pos);
}

inline PartialVersion parse_partial(std::string_view text, std::size_t base) {
  std::size_t pos = 0;
  // npm tolerates "v" and "=" noise in front of range fragments.
  while (pos < text.size() && (text[pos] == 'v' || text[pos] == '=')) ++pos;
  if (pos == text.size()) throw ParseError(base + pos, "expected a version");

  PartialVersion p;
  p.major = parse_part(text, base, pos);
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    p.minor = parse_part(text, base, pos);
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      p.patch = parse_part(text, base, pos);
    }
  }
  if (pos < text.size() && text[pos] == '-') {
    if (!p.major || !p.minor || !p.patch)
      throw ParseError(base + pos, "prerelease requires a full version");
    ++pos;
    p.prerelease = parse_identifier_list(text, base, pos, true);
  }
  if (pos < text.size() && text[pos] == '+') {
    if (!p.major || !p.minor || !p.patch)
      throw ParseError(base + pos, "build metadata requires a full version");
    ++pos;
    p.build = parse_identifier_list(text, base, pos, false);
  }
  if (pos != text.size())
    throw ParseError(base + pos, "unexpected character in version fragment");
  return p;
}

// ^I.J.K widens up to the leftmost nonzero part.
inline void desugar_caret(const PartialVersion& p, Clause& out) {
  if (!p.major) {
    out.push_back(universal_cmp());
    return;
  }
  std::uint64_t M = *p.major;
  if (!p.minor) {
    out.push_back(make_cmp(CmpOp::Ge, M, 0, 0));
    out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0));
    return;
  }
  std::uint64_t m = *p.minor;
  if (!p.patch) {
    out.push_back(make_cmp(CmpOp::Ge, M, m, 0));
    if (M > 0)
      out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0));
    else
      out.push_back(make_cmp(CmpOp::Lt, 0, m + 1, 0));
    return;
  }
  std::uint64_t k = *p.patch;
  out.push_back(make_cmp(CmpOp::Ge, M, m, k, p.prerelease));
  if (M > 0)
    out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0));
  else if (m > 0)
    out.push_back(make_cmp(CmpOp::Lt, 0, m + 1, 0));
  else
    out.push_back(make_cmp(CmpOp::Lt, 0, 0, k + 1));
}

// ~I.J.K holds the minor line; ~I alone behaves like ^I.
inline void desugar_tilde(const PartialVersion& p, Clause& out) {
  if (!p.major) {
    out.push_back(universal_cmp());
    return;
  }
  std::uint64_t M = *p.major;
  if (!p.minor) {
    out.push_back(make_cmp(CmpOp::Ge, M, 0, 0));
    out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0));
    return;
  }
  std::uint64_t m = *p.minor;
  if (!p.patch) {
    out.push_back(make_cmp(CmpOp::Ge, M, m, 0));
    out.push_back(make_cmp(CmpOp::Lt, M, m + 1, 0));
    return;
  }
  out.push_back(make_cmp(CmpOp::Ge, M, m, *p.patch, p.prerelease));
  out.push_back(make_cmp(CmpOp::Lt, M, m + 1, 0));
}

// A bare or "="-prefixed fragment: wildcards open the window, a full triple
// is exact.
inline void desugar_xrange(const PartialVersion& p, Clause& out) {
  if (!p.major) {
    out.push_back(universal_cmp());
    return;
  }
  std::uint64_t M = *p.major;
  if (!p.minor) {
    out.push_back(make_cmp(CmpOp::Ge, M, 0, 0));
    out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0));
    return;
  }
  std::uint64_t m = *p.minor;
  if (!p.patch) {
    out.push_back(make_cmp(CmpOp::Ge, M, m, 0));
    out.push_back(make_cmp(CmpOp::Lt, M, m + 1, 0));
    return;
  }
  out.push_back(make_cmp(CmpOp::Eq, M, m, *p.patch, p.prerelease));
}

// A relational operator applied to a fragment with wildcards collapses to the
// tightest primitive bound, e.g. >1.2 becomes >=1.3.0 and <=1.2 becomes
// <1.3.0. An exclusive bound against a bare wildcard matches nothing.
inline void desugar_primitive(CmpOp op, const PartialVersion& p, Clause& out) {
  if (op == CmpOp::Eq) {
    desugar_xrange(p, out);
    return;
  }
  if (!p.major) {
    if (op == CmpOp::Gt || op == CmpOp::Lt)
      out.push_back(impossible_cmp());
    else
      out.push_back(universal_cmp());
    return;
  }
  std::uint64_t M = *p.major;
  if (!p.minor) {
    switch (op) {
      case CmpOp::Gt: out.push_back(make_cmp(CmpOp::Ge, M + 1, 0, 0)); break;
      case CmpOp::Ge: out.push_back(make_cmp(CmpOp::Ge, M, 0, 0)); break;
      case CmpOp::Lt: out.push_back(make_cmp(CmpOp::Lt, M, 0, 0)); break;
      case CmpOp::Le: out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0)); break;
      default: break;
    }
    return;
  }
  std::uint64_t m = *p.minor;
  if (!p.patch) {
    switch (op) {
      case CmpOp::Gt: out.push_back(make_cmp(CmpOp::Ge, M, m + 1, 0)); break;
      case CmpOp::Ge: out.push_back(make_cmp(CmpOp::Ge, M, m, 0)); break;
      case CmpOp::Lt: out.push_back(make_cmp(CmpOp::Lt, M, m, 0)); break;
      case CmpOp::Le: out.push_back(make_cmp(CmpOp::Lt, M, m + 1, 0)); break;
      default: break;
    }
    return;
  }
  out.push_back(Comparator{op, make_version(M, m, *p.patch, p.prerelease)});
}

// "A - B" is inclusive on both ends; missing parts of A round down and
// missing parts of B widen the ceiling to the next boundary.
inline void desugar_hyphen(const PartialVersion& lo, const PartialVersion& hi,
                           Clause& out) {
  if (lo.major) {
    std::uint64_t M = *lo.major;
    if (!lo.minor)
      out.push_back(make_cmp(CmpOp::Ge, M, 0, 0));
    else if (!lo.patch)
      out.push_back(make_cmp(CmpOp::Ge, M, *lo.minor, 0));
    else
      out.push_back(make_cmp(CmpOp::Ge, M, *lo.minor, *lo.patch, lo.prerelease));
  }
  if (hi.major) {
    std::uint64_t M = *hi.major;
    if (!hi.minor)
      out.push_back(make_cmp(CmpOp::Lt, M + 1, 0, 0));
    else if (!hi.patch)
      out.push_back(make_cmp(CmpOp::Lt, M, *hi.minor + 1, 0));
    else
      out.push_back(make_cmp(CmpOp::Le, M, *hi.minor, *hi.patch, hi.prerelease));
  }
  if (out.empty()) out.push_back(universal_cmp());
}

inline bool is_operator_char(char c) {
  return c == '<' || c == '>' || c == '=' || c == '~' || c == '^';
}

struct RangeToken {
  std::string text;
  std::size_t offset;
};

inline std::vector<RangeToken> tokenize_clause(std::string_view text,
                                               std::size_t base) {
  std::vector<RangeToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    tokens.push_back({std::string(text.substr(start, i - start)), base + start});
  }
  // ">= 1.2.3" and "^ 1.2.3" are single comparators: re-attach an operator
  // that was split from its version by whitespace.
  std::vector<RangeToken> merged;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    bool op_only = !tokens[t].text.empty();
    for (char c : tokens[t].text)
      if (!is_operator_char(c)) op_only = false;
    if (op_only) {
      if (t + 1 == tokens.size())
        throw ParseError(tokens[t].offset, "dangling operator");
      merged.push_back({tokens[t].text + tokens[t + 1].text, tokens[t].offset});
      ++t;
    } else {
      merged.push_back(tokens[t]);
    }
  }
  return merged;
}

inline Clause parse_clause(std::string_view text, std::size_t base) {
  std::vector<RangeToken> tokens = tokenize_clause(text, base);

  Clause clause;
  if (tokens.empty()) {
    clause.push_back(universal_cmp());
    return clause;
  }

  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].text == "-") {
      // Hyphen ranges are only valid as the whole clause: "A - B".
      if (tokens.size() != 3 || t != 1)
        throw ParseError(tokens[t].offset, "misplaced hyphen");
      Clause hyphen;
      desugar_hyphen(parse_partial(tokens[0].text, tokens[0].offset),
                     parse_partial(tokens[2].text, tokens[2].offset), hyphen);
      return hyphen;
    }
  }

  for (const RangeToken& token : tokens) {
    std::string_view body = token.text;
    auto starts = [&body](std::string_view prefix) {
      return body.substr(0, prefix.size()) == prefix;
    };
    if (starts("~>")) {
      desugar_tilde(parse_partial(body.substr(2), token.offset + 2), clause);
    } else if (starts("~")) {
      desugar_tilde(parse_partial(body.substr(1), token.offset + 1), clause);
    } else if (starts("^")) {
      desugar_caret(parse_partial(body.substr(1), token.offset + 1), clause);
    } else if (starts(">=")) {
      desugar_primitive(CmpOp::Ge, parse_partial(body.substr(2), token.offset + 2), clause);
    } else if (starts("<=")) {
      desugar_primitive(CmpOp::Le, parse_partial(body.substr(2), token.offset + 2), clause);
    } else if (starts(">")) {
      desugar_primitive(CmpOp::Gt, parse_partial(body.substr(1), token.offset + 1), clause);
    } else if (starts("<")) {
      desugar_primitive(CmpOp::Lt, parse_partial(body.substr(1), token.offset + 1), clause);
    } else {
      // "=" noise is handled by parse_partial itself.
      desugar_xrange(parse_partial(body, token.offset), clause);
    }
  }
  return clause;
}

}  // namespace detail

/// Parses an npm range expression: "||" separates alternatives, whitespace
/// conjoins comparators, and all sugar forms are desugared to primitives.
/// The empty string is the universal range.
inline RangeExpr parse_range(std::string_view text) {
  RangeExpr r;
  r.source_text.assign(text);

  std::size_t start = 0;
  for (;;) {
    std::size_t bar = text.find("||", start);
    std::string_view piece = bar == std::string_view::npos
                                 ? text.substr(start)
                                 : text.substr(start, bar - start);
    r.clauses.push_back(detail::parse_clause(piece, start));
    if (bar == std::string_view::npos) break;
    start = bar + 2;
  }
  return r;
}

inline std::string format_comparator(const Comparator& c) {
  const char* op = "=";
  switch (c.op) {
    case CmpOp::Eq: op = "="; break;
    case CmpOp::Gt: op = ">"; break;
    case CmpOp::Ge: op = ">="; break;
    case CmpOp::Lt: op = "<"; break;
    case CmpOp::Le: op = "<="; break;
  }
  return std::string(op) + format_version(c.version);
}

/// Canonical desugared rendering. Reparsing the result yields a range with
/// identical satisfaction behavior.
inline std::string format_range(const RangeExpr& r) {
  std::string out;
  for (std::size_t i = 0; i < r.clauses.size(); ++i) {
    if (i != 0) out += " || ";
    for (std::size_t j = 0; j < r.clauses[i].size(); ++j) {
      if (j != 0) out += ' ';
      out += format_comparator(r.clauses[i][j]);
    }
  }
  return out;
}

/// The npm caret window anchored at a concrete version: up to the next major,
/// or the next minor/patch boundary when the anchor starts with zeros.
inline Clause caret_clause(const SemanticVersion& v) {
  Clause clause;
  clause.push_back(Comparator{CmpOp::Ge, make_version(v.major, v.minor, v.patch,
                                                      v.prerelease)});
  if (v.major > 0)
    clause.push_back(detail::make_cmp(CmpOp::Lt, v.major + 1, 0, 0));
  else if (v.minor > 0)
    clause.push_back(detail::make_cmp(CmpOp::Lt, 0, v.minor + 1, 0));
  else
    clause.push_back(detail::make_cmp(CmpOp::Lt, 0, 0, v.patch + 1));
  return clause;
}

inline RangeExpr caret_range(const SemanticVersion& v) {
  RangeExpr r;
  r.source_text = "^" + format_version(v);
  r.clauses.push_back(caret_clause(v));
  return r;
}

}  // namespace depsniff
