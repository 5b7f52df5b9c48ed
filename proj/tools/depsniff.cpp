// Command-line front end: scan, history, corpus, badge.
//
// Exit codes: 0 success, 1 operational error, 2 a --fail-on smell was found.
// Errors take precedence over gating.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <depsniff/depsniff.hpp>

namespace {

struct CliOptions {
  std::string path;
  std::string format = "json";
  std::vector<std::string> smells;
  std::vector<std::string> fail_on;
  std::vector<std::string> extensions;
  std::string since;
  std::string until;
  std::string builtins;
  bool include_dev = false;
  bool timestamped = false;
  bool with_history = false;
  unsigned jobs = 1;
};

bool parse_smell_list(const std::vector<std::string>& tokens,
                      depsniff::SmellSet& out, const char* flag) {
  for (const std::string& token : tokens) {
    std::size_t start = 0;
    while (start <= token.size()) {
      std::size_t comma = token.find(',', start);
      std::string piece = token.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) {
        auto smell = depsniff::smell_from_token(piece);
        if (!smell) {
          std::cerr << "error: unknown smell \"" << piece << "\" in " << flag
                    << "\n";
          return false;
        }
        out.insert(*smell);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return true;
}

bool build_config(const CliOptions& options, depsniff::ScanConfig& config) {
  config.root = options.path;
  config.format = options.format;
  config.include_dev = options.include_dev;
  config.timestamped = options.timestamped;
  config.with_history = options.with_history;
  config.jobs = options.jobs == 0 ? 1 : options.jobs;
  config.since = options.since;
  config.until = options.until;
  config.builtins_path = options.builtins;
  if (!options.extensions.empty()) {
    config.extensions.clear();
    for (std::string ext : options.extensions) {
      if (!ext.empty() && ext[0] != '.') ext = "." + ext;
      config.extensions.push_back(ext);
    }
  }

  depsniff::SmellSet filter;
  if (!parse_smell_list(options.smells, filter, "--smells")) return false;
  if (!filter.empty()) config.smell_filter = filter;
  if (!parse_smell_list(options.fail_on, config.fail_on, "--fail-on"))
    return false;
  for (depsniff::Smell s : config.fail_on)
    if (!config.smell_filter.count(s)) {
      std::cerr << "error: --fail-on includes " << depsniff::smell_code(s)
                << " which --smells excludes\n";
      return false;
    }
  if (!config.since.empty() && !depsniff::parse_iso_date(config.since)) {
    std::cerr << "error: --since expects YYYY-MM-DD\n";
    return false;
  }
  if (!config.until.empty() && !depsniff::parse_iso_date(config.until)) {
    std::cerr << "error: --until expects YYYY-MM-DD\n";
    return false;
  }
  return true;
}

void write_stdout(const std::string& text) {
  std::fwrite(text.data(), 1, text.size(), stdout);
}

int run_scan_command(const CliOptions& options, bool badge_only) {
  depsniff::ScanConfig config;
  if (!build_config(options, config)) return 1;
  depsniff::ProjectReport report;
  try {
    report = depsniff::run_scan(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (badge_only) {
    write_stdout(depsniff::badge_status(report) + "\n");
  } else if (config.format == "json") {
    write_stdout(depsniff::emit_scan_json(report, config.smell_filter));
  } else if (config.format == "csv") {
    write_stdout(depsniff::emit_scan_csv(report));
  } else {
    write_stdout(depsniff::emit_scan_text(report));
  }
  return depsniff::hits_fail_on(report.findings, config.fail_on) ? 2 : 0;
}

int run_history_command(const CliOptions& options) {
  depsniff::ScanConfig config;
  if (!build_config(options, config)) return 1;
  depsniff::HistoryReport report;
  try {
    depsniff::ProcessGitClient client;
    report = depsniff::run_history(config, client);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (config.format == "json")
    write_stdout(depsniff::emit_history_json(report));
  else if (config.format == "csv")
    write_stdout(depsniff::emit_history_csv(report));
  else
    write_stdout(depsniff::emit_history_text(report));
  return 0;
}

int run_corpus_command(const CliOptions& options) {
  depsniff::ScanConfig config;
  if (!build_config(options, config)) return 1;
  depsniff::CorpusReport corpus;
  try {
    corpus = depsniff::run_corpus(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (config.format == "json")
    write_stdout(depsniff::emit_corpus_json(corpus, config.smell_filter));
  else if (config.format == "csv")
    write_stdout(depsniff::emit_corpus_csv(corpus));
  else
    write_stdout(depsniff::emit_corpus_text(corpus));
  for (const depsniff::ProjectReport& project : corpus.projects)
    if (depsniff::hits_fail_on(project.findings, config.fail_on)) return 2;
  return 0;
}

void add_common_options(CLI::App* cmd, CliOptions& options, bool with_scan_flags) {
  cmd->add_option("path", options.path, "project or corpus directory")
      ->required();
  cmd->add_option("--format", options.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--smells", options.smells,
                  "comma-separated smells to report (codes or names)");
  cmd->add_option("--fail-on", options.fail_on,
                  "comma-separated smells that set exit code 2");
  cmd->add_flag("--timestamped", options.timestamped,
                "include a generation timestamp (off by default for "
                "reproducible output)");
  if (with_scan_flags) {
    cmd->add_flag("--include-dev", options.include_dev,
                  "analyze devDependencies as well");
    cmd->add_option("--extensions", options.extensions,
                    "source extensions to scan (default js,jsx,mjs,cjs)");
    cmd->add_option("--builtins", options.builtins,
                    "path to a builtin-module list file")
        ->envname("DEPSNIFF_BUILTINS");
    cmd->add_option("--jobs", options.jobs, "worker count (output is "
                    "identical for any value)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependency smell detector and evolution miner for npm-style "
               "projects"};
  app.require_subcommand(1);

  CliOptions options;
  CLI::App* scan = app.add_subcommand("scan", "analyze one project tree");
  add_common_options(scan, options, true);
  CLI::App* history =
      app.add_subcommand("history", "mine manifest history for smell changes");
  add_common_options(history, options, false);
  history->add_option("--since", options.since, "earliest author date (YYYY-MM-DD)");
  history->add_option("--until", options.until, "latest author date (YYYY-MM-DD)");
  CLI::App* corpus =
      app.add_subcommand("corpus", "aggregate statistics over many projects");
  add_common_options(corpus, options, true);
  corpus->add_flag("--history", options.with_history,
                   "also mine each project's history for accumulation curves");
  CLI::App* badge =
      app.add_subcommand("badge", "print clean or infected for a project");
  add_common_options(badge, options, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (scan->parsed()) return run_scan_command(options, false);
  if (badge->parsed()) return run_scan_command(options, true);
  if (history->parsed()) return run_history_command(options);
  if (corpus->parsed()) return run_corpus_command(options);
  return 1;
}
