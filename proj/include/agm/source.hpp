#pragma once

#include <string>
#include <vector>

namespace agm {

/// 1-based position inside an input file.
///
/// Locations are carried through the AST for diagnostics only. Two locations
/// always compare equal so that defaulted `operator==` on AST nodes yields
/// structural equality; use `same_position` to compare actual coordinates.
struct SourceLocation {
  std::string file;
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) { return true; }

  bool same_position(const SourceLocation& other) const {
    return file == other.file && line == other.line && column == other.column;
  }
  std::string str() const;
};

/// A syntax or name-resolution problem found while reading an input file.
struct ParseDiagnostic {
  SourceLocation location;
  std::string code;      // e.g. "syntax", "unknown-class"
  std::string message;
  std::string expected;  // expected-token summary, empty when not applicable

  /// `file:line:col: message`
  std::string str() const;
};

using Diagnostics = std::vector<ParseDiagnostic>;

}  // namespace agm
