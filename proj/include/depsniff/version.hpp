#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "depsniff/errors.hpp"

namespace depsniff {

/// A parsed major.minor.patch[-prerelease][+build] version. Build metadata is
/// kept for round-tripping but never participates in precedence.
struct SemanticVersion {
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;
  std::vector<std::string> prerelease;
  std::vector<std::string> build;

  bool has_prerelease() const { return !prerelease.empty(); }

  bool same_triple(const SemanticVersion& o) const {
    return major == o.major && minor == o.minor && patch == o.patch;
  }
};

namespace detail {

// Components above this bound would make the +1 arithmetic used when
// desugaring ranges ambiguous.
inline constexpr std::uint64_t kMaxNumericComponent = 1000000000000000ull;

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_identifier_char(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c == '-';
}

inline bool is_numeric_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_digit(c)) return false;
  return true;
}

inline std::uint64_t parse_numeric_component(std::string_view text,
                                             std::size_t start,
                                             std::size_t& pos) {
  std::size_t begin = pos;
  while (pos < text.size() && is_digit(text[pos])) ++pos;
  if (pos == begin) throw ParseError(start + begin, "expected a number");
  if (text[begin] == '0' && pos - begin > 1)
    throw ParseError(start + begin, "numeric component has a leading zero");
  std::uint64_t value = 0;
  for (std::size_t i = begin; i < pos; ++i) {
    value = value * 10 + static_cast<std::uint64_t>(text[i] - '0');
    if (value > kMaxNumericComponent)
      throw ParseError(start + begin, "numeric component too large");
  }
  return value;
}

inline std::vector<std::string> parse_identifier_list(std::string_view text,
                                                      std::size_t start,
                                                      std::size_t& pos,
                                                      bool numeric_rules) {
  std::vector<std::string> identifiers;
  for (;;) {
    std::size_t begin = pos;
    while (pos < text.size() && is_identifier_char(text[pos])) ++pos;
    if (pos == begin) throw ParseError(start + pos, "empty identifier");
    std::string id(text.substr(begin, pos - begin));
    if (numeric_rules && is_numeric_identifier(id) && id.size() > 1 &&
        id[0] == '0')
      throw ParseError(start + begin,
                       "numeric prerelease identifier has a leading zero");
    identifiers.push_back(std::move(id));
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      continue;
    }
    break;
  }
  return identifiers;
}

}  // namespace detail

/// Parses a full semantic version. A single leading "v" or "=" is tolerated;
/// anything else that deviates from the major.minor.patch[-pre][+build]
/// grammar raises ParseError.
inline SemanticVersion parse_version(std::string_view text) {
  std::size_t start = 0;
  if (!text.empty() && (text.front() == 'v' || text.front() == '=')) {
    text.remove_prefix(1);
    start = 1;
  }
  if (text.empty()) throw ParseError(start, "empty version");

  SemanticVersion v;
  std::size_t pos = 0;
  v.major = detail::parse_numeric_component(text, start, pos);
  if (pos >= text.size() || text[pos] != '.')
    throw ParseError(start + pos, "expected '.' after major version");
  ++pos;
  v.minor = detail::parse_numeric_component(text, start, pos);
  if (pos >= text.size() || text[pos] != '.')
    throw ParseError(start + pos, "expected '.' after minor version");
  ++pos;
  v.patch = detail::parse_numeric_component(text, start, pos);

  if (pos < text.size() && text[pos] == '-') {
    ++pos;
    v.prerelease = detail::parse_identifier_list(text, start, pos, true);
  }
  if (pos < text.size() && text[pos] == '+') {
    ++pos;
    v.build = detail::parse_identifier_list(text, start, pos, false);
  }
  if (pos != text.size())
    throw ParseError(start + pos, "trailing characters after version");
  return v;
}

/// SemVer 2.0 precedence: numeric triple first, then prerelease identifiers
/// (a release outranks any of its prereleases). Build metadata is ignored.
/// Returns -1, 0 or 1.
inline int compare_versions(const SemanticVersion& a,
                            const SemanticVersion& b) {
  if (a.major != b.major) return a.major < b.major ? -1 : 1;
  if (a.minor != b.minor) return a.minor < b.minor ? -1 : 1;
  if (a.patch != b.patch) return a.patch < b.patch ? -1 : 1;

  if (a.prerelease.empty() && b.prerelease.empty()) return 0;
  if (a.prerelease.empty()) return 1;
  if (b.prerelease.empty()) return -1;

  std::size_t n = std::min(a.prerelease.size(), b.prerelease.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& x = a.prerelease[i];
    const std::string& y = b.prerelease[i];
    bool xn = detail::is_numeric_identifier(x);
    bool yn = detail::is_numeric_identifier(y);
    if (xn && yn) {
      // Identifiers fit in uint64 by construction; compare numerically.
      if (x.size() != y.size())
        return x.size() < y.size() ? -1 : 1;
      if (int c = x.compare(y); c != 0) return c < 0 ? -1 : 1;
    } else if (xn != yn) {
      return xn ? -1 : 1;
    } else {
      if (int c = x.compare(y); c != 0) return c < 0 ? -1 : 1;
    }
  }
  if (a.prerelease.size() != b.prerelease.size())
    return a.prerelease.size() < b.prerelease.size() ? -1 : 1;
  return 0;
}

inline bool operator==(const SemanticVersion& a, const SemanticVersion& b) {
  return compare_versions(a, b) == 0 && a.build == b.build;
}

inline bool operator<(const SemanticVersion& a, const SemanticVersion& b) {
  return compare_versions(a, b) < 0;
}

inline std::string format_version(const SemanticVersion& v) {
  std::string out = std::to_string(v.major) + '.' + std::to_string(v.minor) +
                    '.' + std::to_string(v.patch);
  auto join = [&out](const std::vector<std::string>& ids, char lead) {
    out += lead;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i != 0) out += '.';
      out += ids[i];
    }
  };
  if (!v.prerelease.empty()) join(v.prerelease, '-');
  if (!v.build.empty()) join(v.build, '+');
  return out;
}

inline SemanticVersion make_version(std::uint64_t major, std::uint64_t minor,
                                    std::uint64_t patch,
                                    std::vector<std::string> prerelease = {}) {
  SemanticVersion v;
  v.major = major;
  v.minor = minor;
  v.patch = patch;
  v.prerelease = std::move(prerelease);
  return v;
}

}  // namespace depsniff
