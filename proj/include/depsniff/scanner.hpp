#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "depsniff/builtins.hpp"
#include "depsniff/classify.hpp"
#include "depsniff/errors.hpp"
#include "depsniff/imports.hpp"
#include "depsniff/manifest.hpp"
#include "depsniff/smells.hpp"

namespace depsniff {

struct ScanConfig {
  std::filesystem::path root;
  std::string format = "json";  // json | csv | text
  SmellSet smell_filter = all_smells();
  SmellSet fail_on;
  bool include_dev = false;
  std::vector<std::string> extensions = {".js", ".jsx", ".mjs", ".cjs"};
  std::string builtins_path;  // empty: embedded default list
  bool timestamped = false;
  unsigned jobs = 1;
  std::string since;  // ISO dates; history mining only
  std::string until;
  bool with_history = false;  // corpus runs: also mine each project repo
};

inline std::set<std::string> builtin_modules_for(const ScanConfig& config) {
  if (config.builtins_path.empty()) return default_builtin_modules();
  return load_builtin_modules(config.builtins_path);
}

/// S5 probe: the three lockfile names are checked in the project root only;
/// lockfiles in subdirectories do not count.
inline std::optional<SmellFinding> detect_lockfile_smell(
    const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec) || ec)
    throw IoError("not a readable directory: " + root.string());
  for (const char* name :
       {"package-lock.json", "npm-shrinkwrap.json", "yarn.lock"})
    if (std::filesystem::exists(root / name, ec) && !ec) return std::nullopt;
  return SmellFinding{Smell::NoLockfile, "", "",
                      "no package-lock.json, npm-shrinkwrap.json, or "
                      "yarn.lock in project root"};
}

struct ProjectImports {
  std::vector<ImportRecord> records;
  std::vector<std::string> diagnostics;
};

namespace detail {

inline std::vector<std::filesystem::path> source_files(
    const std::filesystem::path& root, const std::vector<std::string>& extensions) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  std::filesystem::recursive_directory_iterator it(
      root, std::filesystem::directory_options::skip_permission_denied, ec);
  if (ec) throw IoError("cannot walk " + root.string() + ": " + ec.message());
  std::filesystem::recursive_directory_iterator end;
  while (it != end) {
    const std::filesystem::directory_entry& entry = *it;
    std::string name = entry.path().filename().string();
    if (entry.is_directory(ec)) {
      if (name == "node_modules" || (name.size() > 1 && name[0] == '.'))
        it.disable_recursion_pending();
    } else if (entry.is_regular_file(ec)) {
      std::string ext = entry.path().extension().string();
      for (const std::string& wanted : extensions)
        if (ext == wanted) {
          files.push_back(entry.path());
          break;
        }
    }
    it.increment(ec);
    if (ec) throw IoError("cannot walk " + root.string() + ": " + ec.message());
  }
  std::sort(files.begin(), files.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.generic_string() < b.generic_string();
            });
  return files;
}

inline FileImports scan_one_file(const std::filesystem::path& file,
                                 const std::string& label) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    FileImports out;
    out.diagnostics.push_back("cannot read " + label + "; skipped");
    return out;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return extract_imports_from_source(buffer.str(), label);
}

}  // namespace detail

/// Walks the tree and extracts import records from every matching source
/// file. Files are processed in sorted path order; with several workers the
/// per-file results are merged back in that same order, so the output does
/// not depend on the worker count.
inline ProjectImports extract_imports(const std::filesystem::path& root,
                                      const ScanConfig& config) {
  std::vector<std::filesystem::path> files =
      detail::source_files(root, config.extensions);
  std::vector<std::string> labels;
  labels.reserve(files.size());
  for (const std::filesystem::path& f : files)
    labels.push_back(std::filesystem::relative(f, root).generic_string());

  std::vector<FileImports> per_file(files.size());
  unsigned workers = std::max(1u, config.jobs);
  if (workers == 1 || files.size() < 2) {
    for (std::size_t i = 0; i < files.size(); ++i)
      per_file[i] = detail::scan_one_file(files[i], labels[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned n = std::min<std::size_t>(workers, files.size());
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w)
      pool.emplace_back([&files, &labels, &per_file, &next] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= files.size()) return;
          per_file[i] = detail::scan_one_file(files[i], labels[i]);
        }
      });
    for (std::thread& t : pool) t.join();
  }

  ProjectImports out;
  for (FileImports& fi : per_file) {
    out.records.insert(out.records.end(), fi.records.begin(), fi.records.end());
    out.diagnostics.insert(out.diagnostics.end(), fi.diagnostics.begin(),
                           fi.diagnostics.end());
  }
  return out;
}

struct UsageDiff {
  std::set<std::string> unused;
  std::set<std::string> missing;
  // Lexically first import of each used package, for evidence strings.
  std::map<std::string, ImportRecord> first_use;
};

/// Set difference between declarations and imports. Dev and optional
/// declarations suppress missing findings but are not unused candidates
/// unless dev deps were folded into the analyzed set.
inline UsageDiff compute_unused_missing(const Manifest& manifest,
                                        const std::vector<ImportRecord>& imports,
                                        const std::set<std::string>& builtins,
                                        bool include_dev = false) {
  UsageDiff diff;
  std::set<std::string> used;
  for (const ImportRecord& record : imports) {
    std::optional<std::string> name = resolve_specifier(record.specifier, builtins);
    if (!name) continue;
    used.insert(*name);
    auto [it, inserted] = diff.first_use.emplace(*name, record);
    if (!inserted) {
      const ImportRecord& held = it->second;
      if (std::tie(record.file, record.line) < std::tie(held.file, held.line))
        it->second = record;
    }
  }

  for (const auto& [name, constraint] : manifest.runtime_deps.entries)
    if (!used.count(name)) diff.unused.insert(name);
  if (include_dev)
    for (const auto& [name, constraint] : manifest.dev_deps.entries)
      if (!used.count(name)) diff.unused.insert(name);

  for (const std::string& name : used) {
    if (manifest.runtime_deps.contains(name)) continue;
    if (manifest.dev_deps.contains(name)) continue;
    if (manifest.optional_deps.contains(name)) continue;
    diff.missing.insert(name);
  }
  return diff;
}

struct DependencyClassification {
  std::string name;
  std::string constraint;
  ConstraintClass cls;
  bool dev = false;
};

struct ScanResult {
  Manifest manifest;
  std::vector<DependencyClassification> dependencies;
  std::vector<SmellFinding> findings;  // all smells; filtering happens later
  std::vector<std::string> diagnostics;
  bool lockfile_present = false;
  std::size_t dep_count = 0;
  std::size_t missing_count = 0;
  std::size_t pinned_count = 0;
};

/// Full single-project analysis: manifest, lockfile, constraint classes and
/// the declared/imported cross-check.
inline ScanResult scan_project(const ScanConfig& config) {
  ScanResult result;
  result.manifest = load_manifest(config.root);
  result.diagnostics = result.manifest.diagnostics;

  std::optional<SmellFinding> lockless = detect_lockfile_smell(config.root);
  result.lockfile_present = !lockless.has_value();
  if (lockless) result.findings.push_back(*lockless);

  for (const auto& [name, constraint] : result.manifest.runtime_deps.entries)
    result.dependencies.push_back({name, constraint, classify_constraint(constraint), false});
  if (config.include_dev)
    for (const auto& [name, constraint] : result.manifest.dev_deps.entries)
      result.dependencies.push_back({name, constraint, classify_constraint(constraint), true});
  result.dep_count = result.dependencies.size();

  for (const DependencyClassification& dep : result.dependencies) {
    if (std::optional<Smell> smell = smell_for_constraint(dep.cls.kind)) {
      if (*smell == Smell::PinnedDependency) ++result.pinned_count;
      result.findings.push_back(
          {*smell, dep.name, dep.constraint, dep.cls.detail});
      continue;
    }
    // Informational classes surface as diagnostics, never as findings.
    switch (dep.cls.kind) {
      case ConstraintKind::DistTag:
        result.diagnostics.push_back("dependency \"" + dep.name +
                                     "\": dist-tag \"" + dep.constraint +
                                     "\" (informational, not a smell)");
        break;
      case ConstraintKind::LocalPath:
        result.diagnostics.push_back("dependency \"" + dep.name +
                                     "\": local path constraint \"" +
                                     dep.constraint +
                                     "\" (informational, not a smell)");
        break;
      case ConstraintKind::Unparseable:
        result.diagnostics.push_back("dependency \"" + dep.name +
                                     "\": unparseable constraint \"" +
                                     dep.constraint + "\" (" + dep.cls.detail +
                                     ")");
        break;
      default:
        break;
    }
  }

  ProjectImports imports = extract_imports(config.root, config);
  result.diagnostics.insert(result.diagnostics.end(),
                            imports.diagnostics.begin(),
                            imports.diagnostics.end());

  std::set<std::string> builtins = builtin_modules_for(config);
  UsageDiff usage = compute_unused_missing(result.manifest, imports.records,
                                           builtins, config.include_dev);
  result.missing_count = usage.missing.size();

  for (const std::string& name : usage.unused) {
    const std::string* constraint = result.manifest.runtime_deps.find(name);
    if (!constraint) constraint = result.manifest.dev_deps.find(name);
    result.findings.push_back({Smell::UnusedDependency, name,
                               constraint ? *constraint : "",
                               "declared but never imported"});
  }
  for (const std::string& name : usage.missing) {
    const ImportRecord& use = usage.first_use.at(name);
    result.findings.push_back({Smell::MissingDependency, name, "",
                               use.file + ":" + std::to_string(use.line)});
  }

  std::sort(result.findings.begin(), result.findings.end());
  return result;
}

}  // namespace depsniff
