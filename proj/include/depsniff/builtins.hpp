#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "depsniff/errors.hpp"

namespace depsniff {

/// Node's built-in top-level module names. Imports of these are never missing
/// dependencies. The set grows across runtime releases, so deployments can
/// override it with a pinned list file; this embedded copy is the default.
inline const std::set<std::string>& default_builtin_modules() {
  static const std::set<std::string> modules = {
      "assert",         "async_hooks",   "buffer",
      "child_process",  "cluster",       "console",
      "constants",      "crypto",        "dgram",
      "diagnostics_channel", "dns",      "domain",
      "events",         "fs",            "http",
      "http2",          "https",         "inspector",
      "module",         "net",           "os",
      "path",           "perf_hooks",    "process",
      "punycode",       "querystring",   "readline",
      "repl",           "stream",        "string_decoder",
      "sys",            "timers",        "tls",
      "trace_events",   "tty",           "url",
      "util",           "v8",            "vm",
      "wasi",           "worker_threads", "zlib",
  };
  return modules;
}

/// Loads a builtin-module list: one name per line, "#" starts a comment,
/// blank lines ignored.
inline std::set<std::string> load_builtin_modules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read builtin module list " + path);
  std::set<std::string> modules;
  std::string line;
  while (std::getline(in, line)) {
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    modules.insert(line.substr(b, e - b + 1));
  }
  return modules;
}

}  // namespace depsniff
