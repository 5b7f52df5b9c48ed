#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>

#include "depsniff/classify.hpp"

namespace depsniff {

enum class Smell {
  PinnedDependency,       // S1: constraint admits exactly one version
  UrlDependency,          // S2: constraint fetches from a remote location
  RestrictiveConstraint,  // S3: narrower than the caret window
  PermissiveConstraint,   // S4: wider than the caret window
  NoLockfile,             // S5: no lockfile in the project root
  UnusedDependency,       // S6: declared but never imported
  MissingDependency,      // S7: imported but never declared
};

inline constexpr std::array<Smell, 7> kAllSmells = {
    Smell::PinnedDependency,     Smell::UrlDependency,
    Smell::RestrictiveConstraint, Smell::PermissiveConstraint,
    Smell::NoLockfile,           Smell::UnusedDependency,
    Smell::MissingDependency,
};

inline const char* smell_code(Smell s) {
  switch (s) {
    case Smell::PinnedDependency: return "S1";
    case Smell::UrlDependency: return "S2";
    case Smell::RestrictiveConstraint: return "S3";
    case Smell::PermissiveConstraint: return "S4";
    case Smell::NoLockfile: return "S5";
    case Smell::UnusedDependency: return "S6";
    case Smell::MissingDependency: return "S7";
  }
  return "S?";
}

inline const char* smell_name(Smell s) {
  switch (s) {
    case Smell::PinnedDependency: return "pinned-dependency";
    case Smell::UrlDependency: return "url-dependency";
    case Smell::RestrictiveConstraint: return "restrictive-constraint";
    case Smell::PermissiveConstraint: return "permissive-constraint";
    case Smell::NoLockfile: return "no-lockfile";
    case Smell::UnusedDependency: return "unused-dependency";
    case Smell::MissingDependency: return "missing-dependency";
  }
  return "unknown";
}

/// Accepts either the short code ("S3") or the long name
/// ("restrictive-constraint").
inline std::optional<Smell> smell_from_token(std::string_view token) {
  for (Smell s : kAllSmells)
    if (token == smell_code(s) || token == smell_name(s)) return s;
  return std::nullopt;
}

/// The four constraint classes that carry a smell. Other classes
/// (Compliant, LocalPath, DistTag, Unparseable) never do.
inline std::optional<Smell> smell_for_constraint(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Pinned: return Smell::PinnedDependency;
    case ConstraintKind::Url: return Smell::UrlDependency;
    case ConstraintKind::Restrictive: return Smell::RestrictiveConstraint;
    case ConstraintKind::Permissive: return Smell::PermissiveConstraint;
    default: return std::nullopt;
  }
}

using SmellSet = std::set<Smell>;

inline SmellSet all_smells() {
  return SmellSet(kAllSmells.begin(), kAllSmells.end());
}

/// One detected smell instance. The dependency name is empty exactly for the
/// project-level lockfile smell.
struct SmellFinding {
  Smell smell;
  std::string dependency;
  std::string constraint;
  std::string evidence;
};

inline bool operator<(const SmellFinding& a, const SmellFinding& b) {
  return std::tie(a.smell, a.dependency, a.evidence, a.constraint) <
         std::tie(b.smell, b.dependency, b.evidence, b.constraint);
}

inline bool operator==(const SmellFinding& a, const SmellFinding& b) {
  return a.smell == b.smell && a.dependency == b.dependency &&
         a.constraint == b.constraint && a.evidence == b.evidence;
}

}  // namespace depsniff
