#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depsniff/classify.hpp"
#include "depsniff/git.hpp"
#include "depsniff/manifest.hpp"
#include "depsniff/smells.hpp"

namespace depsniff {

// Proleptic-Gregorian day arithmetic (Howard Hinnant's civil algorithms).
namespace civil {

inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                            unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

}  // namespace civil

/// UTC calendar month used as a timeline bucket.
struct YearMonth {
  std::int64_t year = 0;
  unsigned month = 1;  // 1..12

  std::int64_t index() const { return year * 12 + (month - 1); }
  static YearMonth from_index(std::int64_t idx) {
    std::int64_t y = idx >= 0 ? idx / 12 : (idx - 11) / 12;
    return {y, static_cast<unsigned>(idx - y * 12) + 1};
  }
};

inline bool operator==(const YearMonth& a, const YearMonth& b) {
  return a.index() == b.index();
}
inline bool operator<(const YearMonth& a, const YearMonth& b) {
  return a.index() < b.index();
}

inline YearMonth month_of_epoch(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  if (epoch_seconds < 0 && epoch_seconds % 86400 != 0) --days;
  std::int64_t y;
  unsigned m, d;
  civil::civil_from_days(days, y, m, d);
  return {y, m};
}

inline std::string format_month(const YearMonth& ym) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%04lld-%02u",
                static_cast<long long>(ym.year), ym.month);
  return buffer;
}

/// "YYYY-MM-DD" to epoch seconds at UTC midnight.
inline std::optional<std::int64_t> parse_iso_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
  std::int64_t y = std::stoll(text.substr(0, 4));
  unsigned m = static_cast<unsigned>(std::stoul(text.substr(5, 2)));
  unsigned d = static_cast<unsigned>(std::stoul(text.substr(8, 2)));
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  return civil::days_from_civil(y, m, d) * 86400;
}

/// One manifest snapshot along the first-parent chain. Dependencies are
/// name-keyed; the diff below never tracks renames.
struct ManifestRevision {
  std::string commit_id;
  std::int64_t author_epoch = 0;
  std::string author_iso;
  std::string message;
  std::map<std::string, std::string> runtime_deps;
};

enum class DeltaKind { Added, Removed, Modified };

inline const char* to_string(DeltaKind k) {
  switch (k) {
    case DeltaKind::Added: return "added";
    case DeltaKind::Removed: return "removed";
    case DeltaKind::Modified: return "modified";
  }
  return "unknown";
}

struct DependencyDelta {
  std::string name;
  DeltaKind kind = DeltaKind::Modified;
  std::optional<std::string> before;  // absent iff Added
  std::optional<std::string> after;   // absent iff Removed
  std::string commit_id;
  std::int64_t author_epoch = 0;
};

enum class TransitionEvent { Introduced, Fixed };

inline const char* to_string(TransitionEvent e) {
  return e == TransitionEvent::Introduced ? "introduced" : "fixed";
}

struct SmellTransition {
  DependencyDelta delta;
  TransitionEvent event = TransitionEvent::Introduced;
  Smell smell = Smell::PinnedDependency;
};

struct RevisionScan {
  std::vector<ManifestRevision> revisions;
  std::vector<std::string> diagnostics;
};

/// Revisions of package.json along the first-parent chain, oldest first,
/// optionally windowed by author date. A commit that deletes the manifest
/// yields a revision with no dependencies; a commit whose manifest does not
/// parse is skipped. Both leave a diagnostic.
inline RevisionScan list_manifest_commits(GitClient& client,
                                          const std::string& repo,
                                          std::optional<std::int64_t> since = {},
                                          std::optional<std::int64_t> until = {}) {
  RevisionScan scan;
  for (const CommitInfo& commit : client.commits_touching(repo, "package.json")) {
    if (since && commit.author_epoch < *since) continue;
    if (until && commit.author_epoch >= *until) continue;

    ManifestRevision revision;
    revision.commit_id = commit.id;
    revision.author_epoch = commit.author_epoch;
    revision.author_iso = commit.author_iso;
    revision.message = commit.message;

    std::optional<std::string> content =
        client.file_at(repo, commit.id, "package.json");
    if (!content) {
      scan.diagnostics.push_back("package.json absent at commit " + commit.id +
                                 "; treated as empty");
      scan.revisions.push_back(std::move(revision));
      continue;
    }
    try {
      Manifest manifest = parse_manifest_text(*content, commit.id);
      for (const auto& [name, constraint] : manifest.runtime_deps.entries)
        revision.runtime_deps[name] = constraint;
      for (const std::string& diag : manifest.diagnostics)
        scan.diagnostics.push_back("commit " + commit.id + ": " + diag);
    } catch (const ManifestMalformed& e) {
      scan.diagnostics.push_back("commit " + commit.id +
                                 " skipped: " + e.what());
      continue;
    }
    scan.revisions.push_back(std::move(revision));
  }
  return scan;
}

/// Name-keyed diff of two consecutive revisions, in name order.
inline std::vector<DependencyDelta> diff_dependencies(
    const ManifestRevision& before, const ManifestRevision& after) {
  std::vector<DependencyDelta> deltas;
  auto b = before.runtime_deps.begin();
  auto a = after.runtime_deps.begin();
  while (b != before.runtime_deps.end() || a != after.runtime_deps.end()) {
    DependencyDelta delta;
    delta.commit_id = after.commit_id;
    delta.author_epoch = after.author_epoch;
    if (a == after.runtime_deps.end() ||
        (b != before.runtime_deps.end() && b->first < a->first)) {
      delta.name = b->first;
      delta.kind = DeltaKind::Removed;
      delta.before = b->second;
      ++b;
      deltas.push_back(std::move(delta));
    } else if (b == before.runtime_deps.end() || a->first < b->first) {
      delta.name = a->first;
      delta.kind = DeltaKind::Added;
      delta.after = a->second;
      ++a;
      deltas.push_back(std::move(delta));
    } else {
      if (b->second != a->second) {
        delta.name = a->first;
        delta.kind = DeltaKind::Modified;
        delta.before = b->second;
        delta.after = a->second;
        deltas.push_back(std::move(delta));
      }
      ++b;
      ++a;
    }
  }
  return deltas;
}

/// Transitions for one modified dependency. Leaving a smell-bearing class
/// emits Fixed, entering one emits Introduced; a class-preserving edit emits
/// nothing. Added and Removed deltas never produce events, so removing a
/// smelly dependency is not a fix.
inline std::vector<SmellTransition> classify_transition(
    const DependencyDelta& delta) {
  std::vector<SmellTransition> transitions;
  if (delta.kind != DeltaKind::Modified) return transitions;

  ConstraintClass before_class = classify_constraint(*delta.before);
  ConstraintClass after_class = classify_constraint(*delta.after);
  if (before_class.kind == after_class.kind) return transitions;

  if (std::optional<Smell> fixed = smell_for_constraint(before_class.kind))
    transitions.push_back({delta, TransitionEvent::Fixed, *fixed});
  if (std::optional<Smell> introduced = smell_for_constraint(after_class.kind))
    transitions.push_back({delta, TransitionEvent::Introduced, *introduced});
  return transitions;
}

struct TimelinePoint {
  Smell smell = Smell::PinnedDependency;
  YearMonth month;
  std::uint64_t introduced = 0;
  std::uint64_t fixed = 0;
  std::int64_t accumulation = 0;  // running introduced minus fixed
};

/// Monthly series per smell, from each smell's first event month to its
/// last, with gap months emitted so the accumulation curve is continuous.
inline std::vector<TimelinePoint> build_timeline(
    const std::vector<SmellTransition>& transitions) {
  struct MonthCounts {
    std::uint64_t introduced = 0;
    std::uint64_t fixed = 0;
  };
  std::map<Smell, std::map<std::int64_t, MonthCounts>> by_smell;
  for (const SmellTransition& t : transitions) {
    MonthCounts& counts =
        by_smell[t.smell][month_of_epoch(t.delta.author_epoch).index()];
    if (t.event == TransitionEvent::Introduced)
      ++counts.introduced;
    else
      ++counts.fixed;
  }

  std::vector<TimelinePoint> timeline;
  for (const auto& [smell, months] : by_smell) {
    std::int64_t first = months.begin()->first;
    std::int64_t last = months.rbegin()->first;
    std::int64_t accumulation = 0;
    for (std::int64_t m = first; m <= last; ++m) {
      TimelinePoint point;
      point.smell = smell;
      point.month = YearMonth::from_index(m);
      if (auto it = months.find(m); it != months.end()) {
        point.introduced = it->second.introduced;
        point.fixed = it->second.fixed;
      }
      accumulation += static_cast<std::int64_t>(point.introduced) -
                      static_cast<std::int64_t>(point.fixed);
      point.accumulation = accumulation;
      timeline.push_back(point);
    }
  }
  return timeline;
}

struct HistoryResult {
  std::vector<ManifestRevision> revisions;
  std::vector<DependencyDelta> deltas;
  std::vector<SmellTransition> transitions;
  std::vector<TimelinePoint> timeline;
  std::vector<std::string> diagnostics;
  std::optional<YearMonth> first_month;  // month of the first revision
};

/// Full mining pass over one repository. The first revision contributes
/// Added deltas for its whole dependency set; transitions come only from
/// dependencies that persist between consecutive revisions.
inline HistoryResult mine_repository(GitClient& client, const std::string& repo,
                                     std::optional<std::int64_t> since = {},
                                     std::optional<std::int64_t> until = {}) {
  HistoryResult result;
  RevisionScan scan = list_manifest_commits(client, repo, since, until);
  result.revisions = std::move(scan.revisions);
  result.diagnostics = std::move(scan.diagnostics);
  if (result.revisions.empty()) {
    result.diagnostics.push_back("no manifest history in window");
    return result;
  }
  result.first_month = month_of_epoch(result.revisions.front().author_epoch);

  ManifestRevision empty;
  for (std::size_t i = 0; i < result.revisions.size(); ++i) {
    const ManifestRevision& before = i == 0 ? empty : result.revisions[i - 1];
    std::vector<DependencyDelta> deltas =
        diff_dependencies(before, result.revisions[i]);
    for (const DependencyDelta& delta : deltas) {
      std::vector<SmellTransition> transitions = classify_transition(delta);
      result.transitions.insert(result.transitions.end(), transitions.begin(),
                                transitions.end());
    }
    result.deltas.insert(result.deltas.end(),
                         std::make_move_iterator(deltas.begin()),
                         std::make_move_iterator(deltas.end()));
  }
  result.timeline = build_timeline(result.transitions);
  return result;
}

/// Introduced/fixed totals per smell across a mining result.
inline std::map<Smell, std::pair<std::uint64_t, std::uint64_t>> history_totals(
    const std::vector<SmellTransition>& transitions) {
  std::map<Smell, std::pair<std::uint64_t, std::uint64_t>> totals;
  for (const SmellTransition& t : transitions) {
    auto& [introduced, fixed] = totals[t.smell];
    if (t.event == TransitionEvent::Introduced)
      ++introduced;
    else
      ++fixed;
  }
  return totals;
}

}  // namespace depsniff
