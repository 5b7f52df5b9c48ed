#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depsniff/errors.hpp"
#include "depsniff/history.hpp"
#include "depsniff/scanner.hpp"
#include "depsniff/smells.hpp"

namespace depsniff {

/// Exact fraction. Stored unreduced so numerator and denominator keep their
/// counting meaning; rounding happens only when rendering.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
};

namespace detail {

// num/den as a percentage with one decimal, round half up: 463/887 -> "52.2".
inline std::string percent_text(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return "0.0";
  std::uint64_t scaled = num * 1000;
  std::uint64_t tenths = scaled / den;
  if (2 * (scaled % den) >= den) ++tenths;
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

// Signed mean with one decimal, for accumulation curves.
inline std::string mean_text(std::int64_t total, std::uint64_t den) {
  if (den == 0) return "0.0";
  std::uint64_t magnitude = static_cast<std::uint64_t>(total < 0 ? -total : total);
  std::uint64_t scaled = magnitude * 10;
  std::uint64_t tenths = scaled / den;
  if (2 * (scaled % den) >= den) ++tenths;
  std::string text = std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
  return (total < 0 && tenths != 0) ? "-" + text : text;
}

}  // namespace detail

inline std::string percent_text(const Ratio& r) {
  return detail::percent_text(r.num, r.den);
}

struct ProjectSummary {
  std::string project;
  std::size_t dep_count = 0;      // analyzed dependencies
  std::size_t missing_count = 0;  // S7 findings
  std::size_t pinned_count = 0;   // S1 findings
  bool lockfile_present = false;
  std::map<Smell, std::size_t> finding_counts;
  SmellSet distinct_smells;

  std::size_t count(Smell s) const {
    auto it = finding_counts.find(s);
    return it == finding_counts.end() ? 0 : it->second;
  }
  bool has_pinned() const { return pinned_count > 0; }
  bool has_unpinned() const { return pinned_count < dep_count; }
};

/// Folds a project's (already filtered) findings into a summary.
inline ProjectSummary project_smell_summary(
    const std::string& project, std::size_t dep_count, bool lockfile_present,
    const std::vector<SmellFinding>& findings) {
  ProjectSummary summary;
  summary.project = project;
  summary.dep_count = dep_count;
  summary.lockfile_present = lockfile_present;
  for (const SmellFinding& f : findings) {
    ++summary.finding_counts[f.smell];
    summary.distinct_smells.insert(f.smell);
  }
  summary.missing_count = summary.count(Smell::MissingDependency);
  summary.pinned_count = summary.count(Smell::PinnedDependency);
  return summary;
}

/// Normalized smell ratio for one project. Per-dependency smells divide by
/// the dependency count; missing dependencies divide by declared + missing;
/// the lockfile smell is all or nothing.
inline Ratio smell_ratio(const ProjectSummary& summary, Smell smell) {
  switch (smell) {
    case Smell::NoLockfile:
      return {summary.count(Smell::NoLockfile) > 0 ? 1ull : 0ull, 1};
    case Smell::MissingDependency: {
      std::uint64_t den = summary.dep_count + summary.missing_count;
      if (den == 0) throw ZeroDependencies(summary.project);
      return {summary.missing_count, den};
    }
    default:
      if (summary.dep_count == 0) throw ZeroDependencies(summary.project);
      return {summary.count(smell), summary.dep_count};
  }
}

struct PrevalenceEntry {
  std::size_t projects = 0;
  Ratio share;
};

struct Cooccurrence {
  std::size_t lock_pinned = 0;
  std::size_t lock_unpinned = 0;
  std::size_t nolock_unpinned = 0;
  std::size_t nolock_pinned = 0;
};

/// Per smell: how many projects have at least one finding, and the share of
/// the corpus that is.
inline std::map<Smell, PrevalenceEntry> prevalence_table(
    const std::vector<ProjectSummary>& summaries) {
  if (summaries.empty()) throw EmptyCorpus();
  std::map<Smell, PrevalenceEntry> table;
  for (Smell s : kAllSmells) {
    PrevalenceEntry entry;
    for (const ProjectSummary& summary : summaries)
      if (summary.distinct_smells.count(s)) ++entry.projects;
    entry.share = {entry.projects, summaries.size()};
    table[s] = entry;
  }
  return table;
}

/// Project counts for lockfile presence crossed with pinned/unpinned
/// membership. A project lands in as many cells as apply, so rows overlap.
inline Cooccurrence cooccurrence_lock_pinned(
    const std::vector<ProjectSummary>& summaries) {
  if (summaries.empty()) throw EmptyCorpus();
  Cooccurrence table;
  for (const ProjectSummary& summary : summaries) {
    if (summary.lockfile_present) {
      if (summary.has_pinned()) ++table.lock_pinned;
      if (summary.has_unpinned()) ++table.lock_unpinned;
    } else {
      if (summary.has_pinned()) ++table.nolock_pinned;
      if (summary.has_unpinned()) ++table.nolock_unpinned;
    }
  }
  return table;
}

/// Buckets projects by how many distinct smell types they carry (0..7).
inline std::array<std::size_t, 8> distinct_smell_histogram(
    const std::vector<ProjectSummary>& summaries) {
  if (summaries.empty()) throw EmptyCorpus();
  std::array<std::size_t, 8> histogram{};
  for (const ProjectSummary& summary : summaries)
    ++histogram[summary.distinct_smells.size()];
  return histogram;
}

/// Per-project ratios of each smell, restricted to projects that have the
/// smell at all (the shape of the corpus ratio distributions). The lockfile
/// smell is omitted: its ratio is binary.
inline std::map<Smell, std::vector<Ratio>> ratio_distributions(
    const std::vector<ProjectSummary>& summaries) {
  std::map<Smell, std::vector<Ratio>> distributions;
  for (Smell s : kAllSmells) {
    if (s == Smell::NoLockfile) continue;
    for (const ProjectSummary& summary : summaries)
      if (summary.count(s) > 0)
        distributions[s].push_back(smell_ratio(summary, s));
  }
  return distributions;
}

struct ProjectTimeline {
  std::string project;
  std::optional<YearMonth> first_month;
  std::vector<TimelinePoint> timeline;
};

struct AccumulationPoint {
  YearMonth month;
  std::int64_t total = 0;           // summed accumulation over active projects
  std::size_t active_projects = 0;  // projects whose history started by then

  std::string mean_text() const { return detail::mean_text(total, active_projects); }
};

/// Corpus accumulation per smell and month, normalized by how many projects
/// have any history by that month. Projects carry their last accumulation
/// value forward through months without events.
inline std::map<Smell, std::vector<AccumulationPoint>> accumulation_series(
    const std::vector<ProjectTimeline>& projects) {
  std::vector<const ProjectTimeline*> active;
  for (const ProjectTimeline& p : projects)
    if (p.first_month) active.push_back(&p);
  if (active.empty()) throw EmptyCorpus();

  std::int64_t first = active.front()->first_month->index();
  std::int64_t last = first;
  SmellSet smells;
  for (const ProjectTimeline* p : active) {
    first = std::min(first, p->first_month->index());
    last = std::max(last, p->first_month->index());
    for (const TimelinePoint& point : p->timeline) {
      last = std::max(last, point.month.index());
      smells.insert(point.smell);
    }
  }

  std::map<Smell, std::vector<AccumulationPoint>> series;
  for (Smell smell : smells) {
    std::vector<AccumulationPoint>& points = series[smell];
    for (std::int64_t m = first; m <= last; ++m) {
      AccumulationPoint point;
      point.month = YearMonth::from_index(m);
      for (const ProjectTimeline* p : active) {
        if (p->first_month->index() > m) continue;
        ++point.active_projects;
        std::int64_t value = 0;
        for (const TimelinePoint& tp : p->timeline) {
          if (tp.smell != smell || tp.month.index() > m) continue;
          value = tp.accumulation;  // timeline is month-ascending per smell
        }
        point.total += value;
      }
      points.push_back(point);
    }
  }
  return series;
}

}  // namespace depsniff
