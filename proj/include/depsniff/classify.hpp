#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "depsniff/errors.hpp"
#include "depsniff/grid.hpp"
#include "depsniff/range.hpp"
#include "depsniff/version.hpp"

namespace depsniff {

enum class ConstraintKind {
  Pinned,
  Url,
  Restrictive,
  Permissive,
  Compliant,
  LocalPath,
  DistTag,
  Unparseable,
};

inline const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Pinned: return "pinned";
    case ConstraintKind::Url: return "url";
    case ConstraintKind::Restrictive: return "restrictive";
    case ConstraintKind::Permissive: return "permissive";
    case ConstraintKind::Compliant: return "compliant";
    case ConstraintKind::LocalPath: return "local-path";
    case ConstraintKind::DistTag: return "dist-tag";
    case ConstraintKind::Unparseable: return "unparseable";
  }
  return "unparseable";
}

struct ConstraintClass {
  ConstraintKind kind = ConstraintKind::Unparseable;
  std::string detail;
};

/// Reference window a range is measured against: the caret range of the
/// smallest version the constraint admits.
struct CaretBaseline {
  SemanticVersion anchor;
  RangeExpr range;
};

enum class SetRelation { Equal, StrictSubset, StrictSuperset, Incomparable };

inline CaretBaseline caret_baseline(const RangeExpr& r) {
  std::vector<SemanticVersion> grid = evaluation_grid({&r});
  std::optional<SemanticVersion> anchor = min_satisfying(grid, r);
  if (!anchor) throw EmptyRange("no version satisfies \"" + r.source_text + "\"");
  return CaretBaseline{*anchor, caret_range(*anchor)};
}

/// Compares the satisfaction sets of a range and its baseline over their
/// joint grid.
inline SetRelation compare_to_baseline(const RangeExpr& r,
                                       const CaretBaseline& b) {
  std::vector<SemanticVersion> grid = evaluation_grid({&r, &b.range});
  bool r_in_b = true;
  bool b_in_r = true;
  bool r_any = false;
  for (const SemanticVersion& v : grid) {
    bool in_r = satisfies(v, r);
    bool in_b = satisfies(v, b.range);
    r_any = r_any || in_r;
    if (in_r && !in_b) r_in_b = false;
    if (in_b && !in_r) b_in_r = false;
  }
  if (!r_any) throw EmptyRange("no version satisfies \"" + r.source_text + "\"");
  if (r_in_b && b_in_r) return SetRelation::Equal;
  if (r_in_b) return SetRelation::StrictSubset;
  if (b_in_r) return SetRelation::StrictSuperset;
  return SetRelation::Incomparable;
}

namespace detail {

inline std::string trim_copy(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\n' || s[b] == '\r'))
    ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\n' ||
                   s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

inline bool has_prefix(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Host shorthand: "user/repo" with an optional "#ref". Slashes never occur in
// valid ranges, so this cannot shadow a parseable constraint.
inline bool is_repo_shorthand(std::string_view s) {
  std::string_view body = s;
  if (std::size_t hash = body.find('#'); hash != std::string_view::npos)
    body = body.substr(0, hash);
  std::size_t slash = body.find('/');
  if (slash == std::string_view::npos || slash == 0 ||
      slash + 1 >= body.size())
    return false;
  auto name_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
  };
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i == slash) continue;
    if (body[i] == '/') return false;
    if (!name_char(body[i])) return false;
  }
  return true;
}

inline bool is_dist_tag_word(std::string_view s) {
  static constexpr std::array<std::string_view, 8> kTags = {
      "latest", "next", "beta", "alpha", "canary", "rc", "dev", "experimental"};
  for (std::string_view tag : kTags)
    if (s == tag) return true;
  return false;
}

}  // namespace detail

/// Total classification of a raw constraint string. Routing: wildcards, then
/// URL-ish sources, local links, dist-tags, exact versions, and finally range
/// semantics measured against the caret baseline of the range's own minimum.
/// Garbage and ranges that admit nothing come back Unparseable; this function
/// never throws.
inline ConstraintClass classify_constraint(const std::string& text) {
  std::string s = detail::trim_copy(text);

  if (s.empty()) return {ConstraintKind::Permissive, "empty constraint"};
  if (s == "*" || s == "x" || s == "X")
    return {ConstraintKind::Permissive, "bare wildcard"};

  // Local link protocols are not remote URLs even when spelled file://.
  for (std::string_view proto : {"file:", "link:", "workspace:"})
    if (detail::has_prefix(s, proto))
      return {ConstraintKind::LocalPath, std::string(proto)};

  for (std::string_view scheme :
       {"git+", "git:", "github:", "http:", "https:"})
    if (detail::has_prefix(s, scheme))
      return {ConstraintKind::Url, std::string(scheme)};
  if (s.find("://") != std::string::npos)
    return {ConstraintKind::Url, s.substr(0, s.find("://"))};
  if (detail::is_repo_shorthand(s))
    return {ConstraintKind::Url, "repo shorthand"};

  if (detail::is_dist_tag_word(s)) return {ConstraintKind::DistTag, s};

  try {
    SemanticVersion exact = parse_version(s);
    return {ConstraintKind::Pinned, format_version(exact)};
  } catch (const ParseError&) {
  }

  RangeExpr range;
  try {
    range = parse_range(s);
  } catch (const ParseError& e) {
    return {ConstraintKind::Unparseable, e.reason()};
  }

  try {
    CaretBaseline baseline = caret_baseline(range);
    SetRelation relation = compare_to_baseline(range, baseline);
    switch (relation) {
      case SetRelation::Equal:
        return {ConstraintKind::Compliant, format_range(baseline.range)};
      case SetRelation::StrictSubset: {
        // A range that admits exactly one version is pinning in disguise.
        std::vector<SemanticVersion> grid = evaluation_grid({&range});
        std::size_t admitted = 0;
        for (const SemanticVersion& v : grid)
          if (satisfies(v, range)) ++admitted;
        if (admitted == 1)
          return {ConstraintKind::Pinned, format_version(baseline.anchor)};
        return {ConstraintKind::Restrictive,
                "subset of " + format_range(baseline.range)};
      }
      case SetRelation::StrictSuperset:
        return {ConstraintKind::Permissive,
                "superset of " + format_range(baseline.range)};
      case SetRelation::Incomparable: {
        std::vector<SemanticVersion> grid =
            evaluation_grid({&range, &baseline.range});
        for (const SemanticVersion& v : grid)
          if (v.major > baseline.anchor.major && satisfies(v, range))
            return {ConstraintKind::Permissive,
                    "admits major beyond " + format_version(baseline.anchor)};
        return {ConstraintKind::Restrictive,
                "incomparable with " + format_range(baseline.range)};
      }
    }
  } catch (const EmptyRange& e) {
    return {ConstraintKind::Unparseable, e.what()};
  }
  return {ConstraintKind::Unparseable, "unclassifiable"};
}

}  // namespace depsniff
