#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace depsniff {

enum class ImportForm { RequireCall, StaticImport, DynamicImport, ExportFrom };

inline const char* to_string(ImportForm f) {
  switch (f) {
    case ImportForm::RequireCall: return "require-call";
    case ImportForm::StaticImport: return "static-import";
    case ImportForm::DynamicImport: return "dynamic-import";
    case ImportForm::ExportFrom: return "export-from";
  }
  return "unknown";
}

struct ImportRecord {
  std::string file;
  std::size_t line = 0;
  std::string specifier;
  ImportForm form = ImportForm::RequireCall;
};

struct FileImports {
  std::vector<ImportRecord> records;
  std::vector<std::string> diagnostics;
};

namespace detail {

// Lexical token stream: just enough JavaScript to tell code from comments,
// strings, template literals, and regex literals. Template interpolations
// are balanced over but their contents are opaque.
enum class JsTokenKind { Ident, Str, Punct };

struct JsToken {
  JsTokenKind kind;
  std::string text;
  std::size_t line;
};

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$' || static_cast<unsigned char>(c) >= 0x80;
}

inline bool ident_part(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

// A '/' starts a regex only where an expression may begin; after a value
// token it is division.
inline bool regex_can_follow(const std::vector<JsToken>& tokens) {
  if (tokens.empty()) return true;
  const JsToken& prev = tokens.back();
  if (prev.kind == JsTokenKind::Str) return false;
  if (prev.kind == JsTokenKind::Ident) {
    static const std::set<std::string> keywords = {
        "return", "typeof", "instanceof", "in",   "of",    "new",
        "delete", "void",   "throw",      "case", "do",    "else",
        "yield",  "await"};
    return keywords.count(prev.text) > 0;
  }
  char c = prev.text.empty() ? ' ' : prev.text[0];
  return c != ')' && c != ']';
}

inline void skip_line_comment(std::string_view src, std::size_t& i) {
  while (i < src.size() && src[i] != '\n') ++i;
}

inline void skip_block_comment(std::string_view src, std::size_t& i,
                               std::size_t& line) {
  i += 2;
  while (i < src.size()) {
    if (src[i] == '\n') ++line;
    if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/') {
      i += 2;
      return;
    }
    ++i;
  }
}

inline std::string scan_quoted(std::string_view src, std::size_t& i,
                               std::size_t& line, char quote) {
  std::string value;
  ++i;
  while (i < src.size() && src[i] != quote) {
    if (src[i] == '\\' && i + 1 < src.size()) {
      char esc = src[i + 1];
      switch (esc) {
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        case 'r': value += '\r'; break;
        default: value += esc; break;
      }
      if (esc == '\n') ++line;
      i += 2;
      continue;
    }
    if (src[i] == '\n') ++line;
    value += src[i];
    ++i;
  }
  if (i < src.size()) ++i;
  return value;
}

inline void skip_template(std::string_view src, std::size_t& i,
                          std::size_t& line);

// Inside ${ ... }: balance braces, stepping over nested strings, comments
// and templates.
inline void skip_interpolation(std::string_view src, std::size_t& i,
                               std::size_t& line) {
  int depth = 1;
  while (i < src.size() && depth > 0) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '\'' || c == '"') {
      scan_quoted(src, i, line, c);
    } else if (c == '`') {
      skip_template(src, i, line);
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      skip_line_comment(src, i);
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      skip_block_comment(src, i, line);
    } else if (c == '{') {
      ++depth;
      ++i;
    } else if (c == '}') {
      --depth;
      ++i;
    } else {
      ++i;
    }
  }
}

inline void skip_template(std::string_view src, std::size_t& i,
                          std::size_t& line) {
  ++i;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\\' && i + 1 < src.size()) {
      if (src[i + 1] == '\n') ++line;
      i += 2;
    } else if (c == '`') {
      ++i;
      return;
    } else if (c == '$' && i + 1 < src.size() && src[i + 1] == '{') {
      i += 2;
      skip_interpolation(src, i, line);
    } else {
      if (c == '\n') ++line;
      ++i;
    }
  }
}

inline void skip_regex(std::string_view src, std::size_t& i,
                       std::size_t& line) {
  ++i;
  bool in_class = false;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\\' && i + 1 < src.size()) {
      i += 2;
      continue;
    }
    if (c == '\n') {
      // Unterminated regex; treat the slash as division and resync.
      return;
    }
    if (c == '[') in_class = true;
    else if (c == ']') in_class = false;
    else if (c == '/' && !in_class) {
      ++i;
      while (i < src.size() && ident_part(src[i])) ++i;
      return;
    }
    ++i;
  }
}

inline std::vector<JsToken> lex_js(std::string_view src) {
  std::vector<JsToken> tokens;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
      ++i;
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      skip_line_comment(src, i);
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      skip_block_comment(src, i, line);
    } else if (c == '\'' || c == '"') {
      std::size_t at = line;
      tokens.push_back({JsTokenKind::Str, scan_quoted(src, i, line, c), at});
    } else if (c == '`') {
      std::size_t at = line;
      skip_template(src, i, line);
      // Opaque placeholder: consumers must not mistake it for a literal.
      tokens.push_back({JsTokenKind::Punct, "`", at});
    } else if (c == '/' && regex_can_follow(tokens)) {
      skip_regex(src, i, line);
      tokens.push_back({JsTokenKind::Punct, "/re/", line});
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && ident_part(src[i])) ++i;
      tokens.push_back(
          {JsTokenKind::Ident, std::string(src.substr(start, i - start)), line});
    } else {
      tokens.push_back({JsTokenKind::Punct, std::string(1, c), line});
      ++i;
    }
  }
  return tokens;
}

inline bool is_punct(const JsToken& t, std::string_view text) {
  return t.kind == JsTokenKind::Punct && t.text == text;
}

inline bool is_ident(const JsToken& t, std::string_view text) {
  return t.kind == JsTokenKind::Ident && t.text == text;
}

}  // namespace detail

/// Extracts literal module specifiers from one source file: require("m"),
/// import("m"), import ... from "m", bare import "m", and export ... from
/// "m". Calls whose argument is not a single string literal produce a
/// diagnostic instead of a record.
inline FileImports extract_imports_from_source(std::string_view source,
                                               const std::string& file_label) {
  using namespace detail;
  FileImports out;
  std::vector<JsToken> tokens = lex_js(source);

  auto record = [&out, &file_label](std::size_t line, std::string specifier,
                                    ImportForm form) {
    out.records.push_back({file_label, line, std::move(specifier), form});
  };
  auto dynamic_diag = [&out, &file_label](std::size_t line, const char* what) {
    out.diagnostics.push_back(file_label + ":" + std::to_string(line) +
                              ": dynamic specifier in " + what +
                              "; not recorded");
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const JsToken& t = tokens[i];
    bool after_dot = i > 0 && is_punct(tokens[i - 1], ".");
    if (t.kind != JsTokenKind::Ident || after_dot) continue;

    if (t.text == "require" || (t.text == "import" && i + 1 < tokens.size() &&
                                is_punct(tokens[i + 1], "("))) {
      if (i + 1 >= tokens.size() || !is_punct(tokens[i + 1], "(")) continue;
      ImportForm form = t.text == "require" ? ImportForm::RequireCall
                                            : ImportForm::DynamicImport;
      const char* what = t.text == "require" ? "require()" : "import()";
      if (i + 3 < tokens.size() && tokens[i + 2].kind == JsTokenKind::Str &&
          is_punct(tokens[i + 3], ")"))
        record(tokens[i + 2].line, tokens[i + 2].text, form);
      else
        dynamic_diag(t.line, what);
      continue;
    }

    if (t.text == "import") {
      if (i + 1 < tokens.size() && tokens[i + 1].kind == JsTokenKind::Str) {
        record(tokens[i + 1].line, tokens[i + 1].text, ImportForm::StaticImport);
        continue;
      }
      for (std::size_t j = i + 1; j < tokens.size() && j < i + 48; ++j) {
        if (is_punct(tokens[j], ";")) break;
        if (is_ident(tokens[j], "from")) {
          if (j + 1 < tokens.size() && tokens[j + 1].kind == JsTokenKind::Str)
            record(tokens[j + 1].line, tokens[j + 1].text,
                   ImportForm::StaticImport);
          break;
        }
      }
      continue;
    }

    if (t.text == "export") {
      for (std::size_t j = i + 1; j < tokens.size() && j < i + 48; ++j) {
        if (is_punct(tokens[j], ";")) break;
        // Declaration exports have no source module.
        if (tokens[j].kind == JsTokenKind::Ident &&
            (tokens[j].text == "function" || tokens[j].text == "class" ||
             tokens[j].text == "const" || tokens[j].text == "let" ||
             tokens[j].text == "var" || tokens[j].text == "default" ||
             tokens[j].text == "async"))
          break;
        if (is_ident(tokens[j], "from")) {
          if (j + 1 < tokens.size() && tokens[j + 1].kind == JsTokenKind::Str)
            record(tokens[j + 1].line, tokens[j + 1].text,
                   ImportForm::ExportFrom);
          break;
        }
      }
    }
  }
  return out;
}

/// Maps a specifier to the package it names: "@scope/name/sub" → "@scope/name",
/// "name/sub" → "name". Paths, protocol-qualified specifiers, and built-in
/// modules name no package.
inline std::optional<std::string> resolve_specifier(
    std::string_view specifier, const std::set<std::string>& builtins) {
  if (specifier.empty()) return std::nullopt;
  if (specifier[0] == '.' || specifier[0] == '/' || specifier[0] == '~')
    return std::nullopt;

  std::string name;
  if (specifier[0] == '@') {
    std::size_t slash = specifier.find('/');
    if (slash == std::string_view::npos || slash + 1 >= specifier.size())
      return std::nullopt;
    std::size_t end = specifier.find('/', slash + 1);
    name = std::string(specifier.substr(0, end));
  } else {
    std::size_t slash = specifier.find('/');
    name = std::string(specifier.substr(0, slash));
  }

  // "node:fs", but also "data:", "https:": anything protocol-like is not a
  // registry package.
  if (name.find(':') != std::string::npos) return std::nullopt;
  if (name.empty()) return std::nullopt;
  if (builtins.count(name)) return std::nullopt;
  return name;
}

}  // namespace depsniff
