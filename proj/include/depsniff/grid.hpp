#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "depsniff/range.hpp"
#include "depsniff/version.hpp"

namespace depsniff {

/// Finite probe set used to answer set-level questions about ranges. Built
/// from one shared numeral pool per axis: {0,1,2,3} plus every numeral the
/// ranges mention and its neighbors, so every comparator boundary has grid
/// versions on both sides. Prerelease versions appear only when a range
/// mentions them explicitly.
inline std::vector<SemanticVersion> evaluation_grid(
    const std::vector<const RangeExpr*>& ranges) {
  std::set<std::uint64_t> numerals = {0, 1, 2, 3};
  std::vector<SemanticVersion> specials;

  auto add = [&numerals](std::uint64_t n) {
    numerals.insert(n);
    numerals.insert(n + 1);
    if (n > 0) numerals.insert(n - 1);
  };

  for (const RangeExpr* r : ranges) {
    for (const Clause& clause : r->clauses) {
      for (const Comparator& c : clause) {
        add(c.version.major);
        add(c.version.minor);
        add(c.version.patch);
        if (c.version.has_prerelease())
          specials.push_back(make_version(c.version.major, c.version.minor,
                                          c.version.patch,
                                          c.version.prerelease));
      }
    }
  }

  std::vector<SemanticVersion> grid;
  grid.reserve(numerals.size() * numerals.size() * numerals.size() +
               specials.size());
  for (std::uint64_t a : numerals)
    for (std::uint64_t b : numerals)
      for (std::uint64_t c : numerals) grid.push_back(make_version(a, b, c));
  grid.insert(grid.end(), specials.begin(), specials.end());

  std::sort(grid.begin(), grid.end(),
            [](const SemanticVersion& x, const SemanticVersion& y) {
              return compare_versions(x, y) < 0;
            });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const SemanticVersion& x, const SemanticVersion& y) {
                           return compare_versions(x, y) == 0;
                         }),
             grid.end());
  return grid;
}

/// Smallest grid version the range admits, if any. The grid is ascending, so
/// the first hit is the minimum.
inline std::optional<SemanticVersion> min_satisfying(
    const std::vector<SemanticVersion>& grid, const RangeExpr& r) {
  for (const SemanticVersion& v : grid)
    if (satisfies(v, r)) return v;
  return std::nullopt;
}

}  // namespace depsniff
