#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "agm/model.hpp"
#include "agm/source.hpp"
#include "agm/testcase.hpp"

namespace agm {

/// Reserved words of all three file kinds. None may be used as an identifier.
bool is_keyword(std::string_view word);

struct ModelParse {
  Model model;
  Diagnostics diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

struct TestsParse {
  TestSuite suite;
  Diagnostics diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

struct ScriptParse {
  std::vector<Refactoring> steps;
  Diagnostics diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Syntax only; well-formedness is checked by `validate_model`. After an error
/// the parser resumes at the next top-level declaration.
ModelParse parse_model(std::string_view text, const std::string& file = {});

/// Syntax only, no name resolution (used by the formatter).
TestsParse parse_tests_syntax(std::string_view text, const std::string& file = {});
/// Syntax plus name resolution against `model`.
TestsParse parse_tests(std::string_view text, const Model& model, const std::string& file = {});
/// Name and type resolution of an already parsed suite.
Diagnostics resolve_tests(const TestSuite& suite, const Model& model);

ScriptParse parse_refactorings_syntax(std::string_view text, const std::string& file = {});
/// Syntax plus the checks that do not depend on earlier steps: classes named by
/// a step exist (or were introduced by an earlier rename) and default values
/// are literals.
ScriptParse parse_refactorings(std::string_view text, const Model& model,
                               const std::string& file = {});

/// Parses a single OCL expression (used by tests and tools).
Expr parse_expr(std::string_view text, Diagnostics& diagnostics);

// Canonical printers: 2-space indentation, one declaration per line, AST order,
// no trailing whitespace, exactly one trailing newline.
std::string print_model(const Model& model);
std::string print_tests(const TestSuite& suite);
std::string print_refactorings(const std::vector<Refactoring>& steps);
std::string print_refactoring(const Refactoring& step);
std::string print_expr(const Expr& expr);
std::string print_type(const TypeRef& t);

}  // namespace agm
