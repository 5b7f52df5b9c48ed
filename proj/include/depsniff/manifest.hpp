#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "depsniff/errors.hpp"

namespace depsniff {

/// Dependency section of a manifest, in declaration order. Names are unique;
/// on duplicate keys the last occurrence wins (standard JSON parser
/// behavior) and the caller sees a diagnostic.
struct DependencyMap {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& name) const {
    for (const auto& [key, value] : entries)
      if (key == name) return &value;
    return nullptr;
  }
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

struct Manifest {
  std::string path;
  std::string name;
  DependencyMap runtime_deps;
  DependencyMap dev_deps;
  DependencyMap optional_deps;
  std::vector<std::string> diagnostics;
};

namespace detail {

inline DependencyMap read_dependency_section(const nlohmann::ordered_json& doc,
                                             const char* section,
                                             std::vector<std::string>& diags) {
  DependencyMap deps;
  auto it = doc.find(section);
  if (it == doc.end()) return deps;
  if (!it->is_object()) {
    diags.push_back(std::string(section) + " is not an object; ignored");
    return deps;
  }
  for (const auto& [key, value] : it->items()) {
    if (!value.is_string()) {
      diags.push_back(std::string(section) + "[\"" + key +
                      "\"] is not a string; entry ignored");
      continue;
    }
    deps.entries.emplace_back(key, value.get<std::string>());
  }
  return deps;
}

}  // namespace detail

/// Parses manifest text. Duplicate keys anywhere in the document produce a
/// diagnostic; the parsed value keeps the last occurrence.
inline Manifest parse_manifest_text(const std::string& text,
                                    const std::string& path_label) {
  Manifest m;
  m.path = path_label;

  std::vector<std::set<std::string>> scopes;
  std::vector<std::string> duplicates;
  auto watch_keys = [&scopes, &duplicates](int, nlohmann::ordered_json::parse_event_t event,
                                           nlohmann::ordered_json& parsed) {
    using event_t = nlohmann::ordered_json::parse_event_t;
    if (event == event_t::object_start) {
      scopes.emplace_back();
    } else if (event == event_t::object_end) {
      scopes.pop_back();
    } else if (event == event_t::key) {
      if (!scopes.empty() &&
          !scopes.back().insert(parsed.get<std::string>()).second)
        duplicates.push_back(parsed.get<std::string>());
    }
    return true;
  };

  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text, watch_keys);
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw ManifestMalformed(e.byte, e.what());
  }
  if (!doc.is_object())
    throw ManifestMalformed(0, "manifest root is not an object");

  for (const std::string& key : duplicates)
    m.diagnostics.push_back("duplicate key \"" + key +
                            "\" in manifest; last occurrence wins");

  if (auto it = doc.find("name"); it != doc.end() && it->is_string())
    m.name = it->get<std::string>();
  m.runtime_deps = detail::read_dependency_section(doc, "dependencies", m.diagnostics);
  m.dev_deps = detail::read_dependency_section(doc, "devDependencies", m.diagnostics);
  m.optional_deps =
      detail::read_dependency_section(doc, "optionalDependencies", m.diagnostics);
  return m;
}

/// Loads root/package.json.
inline Manifest load_manifest(const std::filesystem::path& root) {
  std::filesystem::path file = root / "package.json";
  std::error_code ec;
  if (!std::filesystem::exists(file, ec) || ec)
    throw ManifestMissing(file.string());
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest_text(buffer.str(), file.string());
}

}  // namespace depsniff
