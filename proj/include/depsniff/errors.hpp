#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace depsniff {

/// Malformed version or range text. Carries the byte offset of the offending
/// character in the original input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::string reason)
      : std::runtime_error("parse error at offset " + std::to_string(position) +
                           ": " + reason),
        position_(position),
        reason_(std::move(reason)) {}

  std::size_t position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

/// No version on the evaluation grid satisfies the range.
class EmptyRange : public std::runtime_error {
 public:
  explicit EmptyRange(const std::string& what) : std::runtime_error(what) {}
};

class ManifestMissing : public std::runtime_error {
 public:
  explicit ManifestMissing(const std::string& path)
      : std::runtime_error("no package.json found at " + path) {}
};

class ManifestMalformed : public std::runtime_error {
 public:
  ManifestMalformed(std::size_t position, std::string reason)
      : std::runtime_error("malformed package.json at byte " +
                           std::to_string(position) + ": " + reason),
        position_(position),
        reason_(std::move(reason)) {}

  std::size_t position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class NotARepository : public std::runtime_error {
 public:
  explicit NotARepository(const std::string& path)
      : std::runtime_error(path + " is not a git repository") {}
};

class RevisionReadError : public std::runtime_error {
 public:
  RevisionReadError(std::string commit_id, const std::string& detail)
      : std::runtime_error("cannot read revision " + commit_id + ": " + detail),
        commit_id_(std::move(commit_id)) {}

  const std::string& commit_id() const { return commit_id_; }

 private:
  std::string commit_id_;
};

class EmptyCorpus : public std::runtime_error {
 public:
  EmptyCorpus() : std::runtime_error("corpus contains no projects") {}
};

class ZeroDependencies : public std::runtime_error {
 public:
  explicit ZeroDependencies(const std::string& project)
      : std::runtime_error("project " + project +
                           " has no runtime dependencies; per-dependency "
                           "ratios are undefined") {}
};

}  // namespace depsniff
