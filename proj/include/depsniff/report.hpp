#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "depsniff/errors.hpp"
#include "depsniff/history.hpp"
#include "depsniff/scanner.hpp"
#include "depsniff/stats.hpp"

namespace depsniff {

using OrderedJson = nlohmann::ordered_json;

struct ProjectReport {
  std::string schema_version = "1";
  std::string project;
  std::string root;  // as given, never canonicalized: reports stay relocatable
  std::vector<SmellFinding> findings;  // filtered and sorted
  ProjectSummary summary;
  bool lockfile_present = false;
  std::size_t dep_count = 0;
  std::vector<std::string> diagnostics;  // sorted
  std::string generated_at;              // empty unless timestamped
};

struct HistoryReport {
  std::string schema_version = "1";
  std::string project;
  std::string root;
  HistoryResult result;
  std::string generated_at;
};

struct CorpusReport {
  std::string schema_version = "1";
  std::string root;
  std::vector<ProjectReport> projects;  // sorted by directory name
  std::map<Smell, PrevalenceEntry> prevalence;
  std::array<std::size_t, 8> histogram{};
  Cooccurrence cooccurrence;
  // (project, ratio) per smell, over projects that have the smell.
  std::map<Smell, std::vector<std::pair<std::string, Ratio>>> distributions;
  std::map<Smell, std::vector<AccumulationPoint>> accumulation;
  bool has_accumulation = false;
  std::vector<std::string> diagnostics;
  std::string generated_at;
};

namespace detail {

inline std::string utc_now_rfc3339() {
  std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

inline std::string project_label(const std::filesystem::path& root,
                                 const std::string& manifest_name) {
  if (!manifest_name.empty()) return manifest_name;
  std::string leaf = root.filename().string();
  if (leaf.empty() || leaf == ".") leaf = root.string();
  return leaf;
}

inline OrderedJson ratio_json(const Ratio& r) {
  OrderedJson j;
  j["count"] = r.num;
  j["denominator"] = r.den;
  j["percent"] = percent_text(r);
  return j;
}

inline OrderedJson finding_json(const SmellFinding& f) {
  OrderedJson j;
  j["smell"] = smell_code(f.smell);
  j["name"] = smell_name(f.smell);
  if (f.smell == Smell::NoLockfile)
    j["dependency"] = nullptr;
  else
    j["dependency"] = f.dependency;
  if (f.smell == Smell::NoLockfile || f.smell == Smell::MissingDependency)
    j["constraint"] = nullptr;
  else
    j["constraint"] = f.constraint;
  j["evidence"] = f.evidence;
  return j;
}

// Summary block shared by scan reports and per-project corpus slices.
inline OrderedJson project_body_json(const ProjectReport& report,
                                     const SmellSet& filter) {
  OrderedJson j;
  j["project"] = report.project;
  j["root"] = report.root;
  j["dependency_count"] = report.dep_count;
  j["lockfile_present"] = report.lockfile_present;

  OrderedJson findings = OrderedJson::array();
  for (const SmellFinding& f : report.findings) findings.push_back(finding_json(f));
  j["findings"] = findings;

  OrderedJson counts = OrderedJson::object();
  for (Smell s : kAllSmells)
    if (std::size_t n = report.summary.count(s)) counts[smell_code(s)] = n;
  OrderedJson distinct = OrderedJson::array();
  for (Smell s : kAllSmells)
    if (report.summary.distinct_smells.count(s)) distinct.push_back(smell_code(s));
  OrderedJson ratios = OrderedJson::object();
  for (Smell s : kAllSmells) {
    if (!filter.count(s)) continue;
    try {
      ratios[smell_code(s)] = ratio_json(smell_ratio(report.summary, s));
    } catch (const ZeroDependencies&) {
      // Ratio undefined for this project; omitted.
    }
  }
  OrderedJson summary;
  summary["counts"] = counts;
  summary["distinct_smells"] = distinct;
  summary["distinct_count"] = report.summary.distinct_smells.size();
  summary["ratios"] = ratios;
  j["summary"] = summary;

  j["diagnostics"] = report.diagnostics;
  return j;
}

inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace detail

/// Builds a report from a finished scan: findings filtered and sorted,
/// diagnostics sorted, summary computed over the filtered findings only.
inline ProjectReport make_project_report(const ScanResult& scan,
                                         const ScanConfig& config,
                                         const std::string& root_label) {
  ProjectReport report;
  report.root = root_label;
  report.project = detail::project_label(root_label, scan.manifest.name);
  report.lockfile_present = scan.lockfile_present;
  report.dep_count = scan.dep_count;

  for (const SmellFinding& f : scan.findings)
    if (config.smell_filter.count(f.smell)) report.findings.push_back(f);
  std::sort(report.findings.begin(), report.findings.end());

  report.summary = project_smell_summary(report.project, scan.dep_count,
                                         scan.lockfile_present, report.findings);
  report.diagnostics = scan.diagnostics;
  std::sort(report.diagnostics.begin(), report.diagnostics.end());
  if (config.timestamped) report.generated_at = detail::utc_now_rfc3339();
  return report;
}

inline ProjectReport run_scan(const ScanConfig& config) {
  ScanResult scan = scan_project(config);
  return make_project_report(scan, config, config.root.string());
}

/// "infected" iff any finding survived the smell filter.
inline std::string badge_status(const ProjectReport& report) {
  return report.findings.empty() ? "clean" : "infected";
}

inline bool hits_fail_on(const std::vector<SmellFinding>& findings,
                         const SmellSet& fail_on) {
  for (const SmellFinding& f : findings)
    if (fail_on.count(f.smell)) return true;
  return false;
}

inline HistoryReport run_history(const ScanConfig& config, GitClient& client) {
  HistoryReport report;
  report.root = config.root.string();

  std::string manifest_name;
  try {
    manifest_name = load_manifest(config.root).name;
  } catch (const std::exception&) {
    // History can be mined without a readable working-tree manifest.
  }
  report.project = detail::project_label(config.root, manifest_name);

  std::optional<std::int64_t> since;
  std::optional<std::int64_t> until;
  if (!config.since.empty()) since = parse_iso_date(config.since);
  if (!config.until.empty()) {
    until = parse_iso_date(config.until);
    if (until) *until += 86400;  // inclusive end date
  }
  report.result = mine_repository(client, config.root.string(), since, until);
  std::sort(report.result.diagnostics.begin(), report.result.diagnostics.end());
  if (config.timestamped) report.generated_at = detail::utc_now_rfc3339();
  return report;
}

inline CorpusReport run_corpus(const ScanConfig& config) {
  CorpusReport corpus;
  corpus.root = config.root.string();

  std::error_code ec;
  if (!std::filesystem::is_directory(config.root, ec) || ec)
    throw IoError("not a readable directory: " + config.root.string());

  std::vector<std::filesystem::path> candidates;
  for (const auto& entry : std::filesystem::directory_iterator(config.root)) {
    if (!entry.is_directory()) continue;
    if (std::filesystem::exists(entry.path() / "package.json"))
      candidates.push_back(entry.path());
    else
      corpus.diagnostics.push_back("skipping " + entry.path().filename().string() +
                                   ": no package.json");
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.filename().string() < b.filename().string();
            });

  // One slot per project; workers fill them by index so assembly order never
  // depends on scheduling.
  std::vector<std::optional<ProjectReport>> slots(candidates.size());
  std::vector<std::string> failures(candidates.size());
  auto scan_one = [&](std::size_t i) {
    ScanConfig project_config = config;
    project_config.root = candidates[i];
    project_config.jobs = 1;
    project_config.timestamped = false;
    try {
      ScanResult scan = scan_project(project_config);
      slots[i] = make_project_report(scan, project_config,
                                     candidates[i].filename().string());
    } catch (const std::exception& e) {
      failures[i] = std::string("skipping ") + candidates[i].filename().string() +
                    ": " + e.what();
    }
  };
  unsigned workers = std::max(1u, config.jobs);
  if (workers == 1 || candidates.size() < 2) {
    for (std::size_t i = 0; i < candidates.size(); ++i) scan_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned n = std::min<std::size_t>(workers, candidates.size());
    for (unsigned w = 0; w < n; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= candidates.size()) return;
          scan_one(i);
        }
      });
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!failures[i].empty()) {
      corpus.diagnostics.push_back(failures[i]);
      continue;
    }
    if (!slots[i]) continue;
    if (slots[i]->dep_count == 0) {
      corpus.diagnostics.push_back("excluding " +
                                   candidates[i].filename().string() +
                                   ": no runtime dependencies");
      continue;
    }
    corpus.projects.push_back(std::move(*slots[i]));
  }
  if (corpus.projects.empty()) throw EmptyCorpus();

  std::vector<ProjectSummary> summaries;
  summaries.reserve(corpus.projects.size());
  for (const ProjectReport& p : corpus.projects) summaries.push_back(p.summary);

  corpus.prevalence = prevalence_table(summaries);
  corpus.histogram = distinct_smell_histogram(summaries);
  corpus.cooccurrence = cooccurrence_lock_pinned(summaries);
  for (Smell s : kAllSmells) {
    if (s == Smell::NoLockfile || !config.smell_filter.count(s)) continue;
    for (const ProjectSummary& summary : summaries)
      if (summary.count(s) > 0)
        corpus.distributions[s].emplace_back(summary.project,
                                             smell_ratio(summary, s));
  }

  if (config.with_history) {
    ProcessGitClient client;
    std::vector<ProjectTimeline> timelines;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::string name = candidates[i].filename().string();
      bool kept = false;
      for (const ProjectReport& p : corpus.projects)
        if (p.root == name) kept = true;
      if (!kept) continue;
      try {
        HistoryResult mined = mine_repository(client, candidates[i].string());
        timelines.push_back({name, mined.first_month, mined.timeline});
      } catch (const NotARepository&) {
        corpus.diagnostics.push_back("no version control history for " + name);
      }
    }
    try {
      corpus.accumulation = accumulation_series(timelines);
      corpus.has_accumulation = true;
    } catch (const EmptyCorpus&) {
      corpus.diagnostics.push_back("no project has manifest history");
    }
  }

  std::sort(corpus.diagnostics.begin(), corpus.diagnostics.end());
  if (config.timestamped) corpus.generated_at = detail::utc_now_rfc3339();
  return corpus;
}

// ---- serialization ----

inline std::string emit_scan_json(const ProjectReport& report,
                                  const SmellSet& filter) {
  OrderedJson j;
  j["schema_version"] = report.schema_version;
  if (!report.generated_at.empty()) j["generated_at"] = report.generated_at;
  OrderedJson body = detail::project_body_json(report, filter);
  for (auto& [key, value] : body.items()) j[key] = value;
  return j.dump(2) + "\n";
}

inline std::string emit_scan_csv(const ProjectReport& report) {
  std::string out = "smell,dependency,constraint,evidence\n";
  for (const SmellFinding& f : report.findings) {
    out += detail::csv_field(smell_code(f.smell));
    out += ',';
    out += detail::csv_field(f.dependency);
    out += ',';
    out += detail::csv_field(f.constraint);
    out += ',';
    out += detail::csv_field(f.evidence);
    out += '\n';
  }
  return out;
}

inline std::string emit_scan_text(const ProjectReport& report) {
  std::string out;
  out += "project: " + report.project + "\n";
  out += "root: " + report.root + "\n";
  if (!report.generated_at.empty())
    out += "generated: " + report.generated_at + "\n";
  out += "dependencies analyzed: " + std::to_string(report.dep_count) + "\n";
  out += std::string("lockfile: ") +
         (report.lockfile_present ? "present" : "missing") + "\n";
  out += "findings (" + std::to_string(report.findings.size()) + "):\n";
  for (const SmellFinding& f : report.findings) {
    out += std::string("  ") + smell_code(f.smell) + " " + smell_name(f.smell);
    if (!f.dependency.empty()) out += " " + f.dependency;
    if (!f.constraint.empty()) out += " \"" + f.constraint + "\"";
    if (!f.evidence.empty()) out += " [" + f.evidence + "]";
    out += "\n";
  }
  if (!report.diagnostics.empty()) {
    out += "diagnostics (" + std::to_string(report.diagnostics.size()) + "):\n";
    for (const std::string& d : report.diagnostics) out += "  " + d + "\n";
  }
  return out;
}

inline std::string emit_history_json(const HistoryReport& report) {
  OrderedJson j;
  j["schema_version"] = report.schema_version;
  if (!report.generated_at.empty()) j["generated_at"] = report.generated_at;
  j["project"] = report.project;
  j["root"] = report.root;
  j["revision_count"] = report.result.revisions.size();
  if (report.result.first_month)
    j["first_month"] = format_month(*report.result.first_month);
  else
    j["first_month"] = nullptr;

  OrderedJson totals = OrderedJson::object();
  for (const auto& [smell, counts] : history_totals(report.result.transitions)) {
    OrderedJson t;
    t["introduced"] = counts.first;
    t["fixed"] = counts.second;
    totals[smell_code(smell)] = t;
  }
  j["totals"] = totals;

  OrderedJson timeline = OrderedJson::array();
  for (const TimelinePoint& p : report.result.timeline) {
    OrderedJson point;
    point["smell"] = smell_code(p.smell);
    point["month"] = format_month(p.month);
    point["introduced"] = p.introduced;
    point["fixed"] = p.fixed;
    point["accumulation"] = p.accumulation;
    timeline.push_back(point);
  }
  j["timeline"] = timeline;

  OrderedJson transitions = OrderedJson::array();
  for (const SmellTransition& t : report.result.transitions) {
    OrderedJson entry;
    entry["commit"] = t.delta.commit_id;
    entry["month"] = format_month(month_of_epoch(t.delta.author_epoch));
    entry["dependency"] = t.delta.name;
    entry["event"] = to_string(t.event);
    entry["smell"] = smell_code(t.smell);
    entry["before"] = t.delta.before ? OrderedJson(*t.delta.before) : OrderedJson(nullptr);
    entry["after"] = t.delta.after ? OrderedJson(*t.delta.after) : OrderedJson(nullptr);
    transitions.push_back(entry);
  }
  j["transitions"] = transitions;
  j["diagnostics"] = report.result.diagnostics;
  return j.dump(2) + "\n";
}

inline std::string emit_history_csv(const HistoryReport& report) {
  std::string out = "smell,month,introduced,fixed,accumulation\n";
  for (const TimelinePoint& p : report.result.timeline) {
    out += smell_code(p.smell);
    out += ',' + format_month(p.month);
    out += ',' + std::to_string(p.introduced);
    out += ',' + std::to_string(p.fixed);
    out += ',' + std::to_string(p.accumulation);
    out += '\n';
  }
  return out;
}

inline std::string emit_history_text(const HistoryReport& report) {
  std::string out;
  out += "project: " + report.project + "\n";
  out += "root: " + report.root + "\n";
  out += "revisions: " + std::to_string(report.result.revisions.size()) + "\n";
  auto totals = history_totals(report.result.transitions);
  out += "totals:\n";
  for (const auto& [smell, counts] : totals)
    out += std::string("  ") + smell_code(smell) + " introduced=" +
           std::to_string(counts.first) + " fixed=" +
           std::to_string(counts.second) + "\n";
  out += "timeline:\n";
  for (const TimelinePoint& p : report.result.timeline)
    out += std::string("  ") + smell_code(p.smell) + " " + format_month(p.month) +
           " +" + std::to_string(p.introduced) + " -" + std::to_string(p.fixed) +
           " =" + std::to_string(p.accumulation) + "\n";
  for (const std::string& d : report.result.diagnostics)
    out += "note: " + d + "\n";
  return out;
}

inline std::string emit_corpus_json(const CorpusReport& corpus,
                                    const SmellSet& filter) {
  OrderedJson j;
  j["schema_version"] = corpus.schema_version;
  if (!corpus.generated_at.empty()) j["generated_at"] = corpus.generated_at;
  j["root"] = corpus.root;
  j["project_count"] = corpus.projects.size();

  OrderedJson projects = OrderedJson::array();
  for (const ProjectReport& p : corpus.projects)
    projects.push_back(detail::project_body_json(p, filter));
  j["projects"] = projects;

  OrderedJson prevalence = OrderedJson::object();
  for (Smell s : kAllSmells) {
    auto it = corpus.prevalence.find(s);
    if (it == corpus.prevalence.end()) continue;
    OrderedJson entry;
    entry["projects"] = it->second.projects;
    entry["percent"] = percent_text(it->second.share);
    prevalence[smell_code(s)] = entry;
  }
  j["prevalence"] = prevalence;

  OrderedJson histogram = OrderedJson::object();
  for (std::size_t k = 0; k < corpus.histogram.size(); ++k)
    histogram[std::to_string(k)] = corpus.histogram[k];
  j["distinct_histogram"] = histogram;

  OrderedJson co;
  co["lock_and_pinned"] = corpus.cooccurrence.lock_pinned;
  co["lock_and_unpinned"] = corpus.cooccurrence.lock_unpinned;
  co["nolock_and_unpinned"] = corpus.cooccurrence.nolock_unpinned;
  co["nolock_and_pinned"] = corpus.cooccurrence.nolock_pinned;
  j["cooccurrence"] = co;

  OrderedJson distributions = OrderedJson::object();
  for (const auto& [smell, entries] : corpus.distributions) {
    OrderedJson list = OrderedJson::array();
    for (const auto& [project, ratio] : entries) {
      OrderedJson fields = detail::ratio_json(ratio);
      OrderedJson entry;
      entry["project"] = project;
      for (auto& [key, value] : fields.items()) entry[key] = value;
      list.push_back(entry);
    }
    distributions[smell_code(smell)] = list;
  }
  j["ratio_distributions"] = distributions;

  if (corpus.has_accumulation) {
    OrderedJson accumulation = OrderedJson::object();
    for (const auto& [smell, points] : corpus.accumulation) {
      OrderedJson list = OrderedJson::array();
      for (const AccumulationPoint& p : points) {
        OrderedJson entry;
        entry["month"] = format_month(p.month);
        entry["total"] = p.total;
        entry["active_projects"] = p.active_projects;
        entry["mean"] = p.mean_text();
        list.push_back(entry);
      }
      accumulation[smell_code(smell)] = list;
    }
    j["accumulation"] = accumulation;
  }

  j["diagnostics"] = corpus.diagnostics;
  return j.dump(2) + "\n";
}

inline std::string emit_corpus_csv(const CorpusReport& corpus) {
  std::string out = "table,smell,key,value\n";
  for (Smell s : kAllSmells) {
    auto it = corpus.prevalence.find(s);
    if (it == corpus.prevalence.end()) continue;
    out += std::string("prevalence,") + smell_code(s) + ",projects," +
           std::to_string(it->second.projects) + "\n";
    out += std::string("prevalence,") + smell_code(s) + ",percent," +
           percent_text(it->second.share) + "\n";
  }
  for (std::size_t k = 0; k < corpus.histogram.size(); ++k)
    out += "histogram,," + std::to_string(k) + "," +
           std::to_string(corpus.histogram[k]) + "\n";
  out += "cooccurrence,,lock_and_pinned," +
         std::to_string(corpus.cooccurrence.lock_pinned) + "\n";
  out += "cooccurrence,,lock_and_unpinned," +
         std::to_string(corpus.cooccurrence.lock_unpinned) + "\n";
  out += "cooccurrence,,nolock_and_unpinned," +
         std::to_string(corpus.cooccurrence.nolock_unpinned) + "\n";
  out += "cooccurrence,,nolock_and_pinned," +
         std::to_string(corpus.cooccurrence.nolock_pinned) + "\n";
  for (const auto& [smell, entries] : corpus.distributions)
    for (const auto& [project, ratio] : entries)
      out += std::string("ratio,") + smell_code(smell) + "," +
             detail::csv_field(project) + "," + percent_text(ratio) + "\n";
  if (corpus.has_accumulation)
    for (const auto& [smell, points] : corpus.accumulation)
      for (const AccumulationPoint& p : points)
        out += std::string("accumulation,") + smell_code(smell) + "," +
               format_month(p.month) + "," + p.mean_text() + "\n";
  return out;
}

inline std::string emit_corpus_text(const CorpusReport& corpus) {
  std::string out;
  out += "corpus: " + corpus.root + " (" +
         std::to_string(corpus.projects.size()) + " projects)\n";
  out += "prevalence:\n";
  for (Smell s : kAllSmells) {
    auto it = corpus.prevalence.find(s);
    if (it == corpus.prevalence.end()) continue;
    out += std::string("  ") + smell_code(s) + " " + smell_name(s) + ": " +
           std::to_string(it->second.projects) + " (" +
           percent_text(it->second.share) + "%)\n";
  }
  out += "distinct smell histogram:\n";
  for (std::size_t k = 0; k < corpus.histogram.size(); ++k)
    out += "  " + std::to_string(k) + " smells: " +
           std::to_string(corpus.histogram[k]) + "\n";
  out += "lockfile x pinned co-occurrence:\n";
  out += "  lock & pinned: " + std::to_string(corpus.cooccurrence.lock_pinned) + "\n";
  out += "  lock & unpinned: " + std::to_string(corpus.cooccurrence.lock_unpinned) + "\n";
  out += "  no lock & unpinned: " +
         std::to_string(corpus.cooccurrence.nolock_unpinned) + "\n";
  out += "  no lock & pinned: " +
         std::to_string(corpus.cooccurrence.nolock_pinned) + "\n";
  if (corpus.has_accumulation) {
    out += "accumulation (mean per active project):\n";
    for (const auto& [smell, points] : corpus.accumulation)
      for (const AccumulationPoint& p : points)
        out += std::string("  ") + smell_code(smell) + " " +
               format_month(p.month) + ": " + p.mean_text() + " (" +
               std::to_string(p.active_projects) + " active)\n";
  }
  for (const std::string& d : corpus.diagnostics) out += "note: " + d + "\n";
  return out;
}

}  // namespace depsniff
