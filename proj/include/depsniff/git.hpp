#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depsniff/errors.hpp"
#include "depsniff/process.hpp"

namespace depsniff {

struct CommitInfo {
  std::string id;
  std::int64_t author_epoch = 0;
  std::string author_iso;
  std::string message;
};

/// The two version-control queries history mining needs. Anything beyond
/// these stays out of the contract so alternative backends stay possible.
class GitClient {
 public:
  virtual ~GitClient() = default;

  /// Commits on the first-parent chain of the checked-out branch that touch
  /// the given path, oldest first.
  virtual std::vector<CommitInfo> commits_touching(const std::string& repo,
                                                   const std::string& path) = 0;

  /// File content at a commit; nullopt when the path does not exist there.
  virtual std::optional<std::string> file_at(const std::string& repo,
                                             const std::string& commit,
                                             const std::string& path) = 0;
};

/// Shells out to the standard git client.
class ProcessGitClient : public GitClient {
 public:
  std::vector<CommitInfo> commits_touching(const std::string& repo,
                                           const std::string& path) override {
    ensure_repository(repo);

    ProcessResult head = run_process(
        {"git", "-C", repo, "rev-parse", "--verify", "-q", "HEAD"});
    if (head.exit_code != 0) return {};  // repository without commits

    // Unit separator between fields, NUL between records: commit messages
    // may contain anything short of a NUL.
    ProcessResult log = run_process(
        {"git", "-C", repo, "log", "HEAD", "--first-parent", "--reverse", "-z",
         "--format=%H%x1f%at%x1f%aI%x1f%B", "--", path});
    if (log.exit_code != 0) throw RevisionReadError("HEAD", log.err);

    std::vector<CommitInfo> commits;
    std::size_t start = 0;
    while (start < log.out.size()) {
      std::size_t end = log.out.find('\0', start);
      if (end == std::string::npos) end = log.out.size();
      std::string record = log.out.substr(start, end - start);
      start = end + 1;
      if (record.empty()) continue;

      CommitInfo info;
      std::size_t f1 = record.find('\x1f');
      std::size_t f2 = record.find('\x1f', f1 + 1);
      std::size_t f3 = record.find('\x1f', f2 + 1);
      if (f1 == std::string::npos || f2 == std::string::npos ||
          f3 == std::string::npos)
        throw RevisionReadError("HEAD", "unexpected log record shape");
      info.id = record.substr(0, f1);
      info.author_epoch = std::stoll(record.substr(f1 + 1, f2 - f1 - 1));
      info.author_iso = record.substr(f2 + 1, f3 - f2 - 1);
      info.message = record.substr(f3 + 1);
      while (!info.message.empty() &&
             (info.message.back() == '\n' || info.message.back() == '\r'))
        info.message.pop_back();
      commits.push_back(std::move(info));
    }
    return commits;
  }

  std::optional<std::string> file_at(const std::string& repo,
                                     const std::string& commit,
                                     const std::string& path) override {
    ProcessResult show =
        run_process({"git", "-C", repo, "show", commit + ":" + path});
    if (show.exit_code == 0) return show.out;
    if (show.err.find("invalid object name") != std::string::npos ||
        show.err.find("bad revision") != std::string::npos ||
        show.err.find("unknown revision") != std::string::npos)
      throw RevisionReadError(commit, show.err);
    return std::nullopt;
  }

 private:
  static void ensure_repository(const std::string& repo) {
    ProcessResult probe =
        run_process({"git", "-C", repo, "rev-parse", "--git-dir"});
    if (probe.exit_code != 0) throw NotARepository(repo);
  }
};

}  // namespace depsniff
