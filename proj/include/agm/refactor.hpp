#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/testcase.hpp"

namespace agm {

/// One violated context condition.
///   C1 pull-up attribute: no same-named attribute at the target or in another
///      subclass of it
///   C2 pull-up attribute: merged declarations have identical types
///   C3 pull-up method: the body only uses members visible at the target
///   C4 pull-up method: no signature or dispatch conflict at the target
///   C5 pull-up method (abstract): every concrete subclass implements it and
///      the target is never instantiated
///   C6 renames: no collision in the affected scope
struct Violation {
  std::string condition;
  SourceLocation location;
  std::string message;

  std::string str() const;
};

struct ConditionReport {
  Refactoring step;
  std::vector<Violation> violations;

  bool applicable() const { return violations.empty(); }
  bool has(const std::string& condition) const;
};

enum class Disposition { Unchanged, Adapted, NeedsAttention };
const char* to_string(Disposition d);

struct TestDisposition {
  std::string test;
  Disposition disposition = Disposition::Unchanged;
  std::vector<std::string> edits;  // adapted: what was rewritten
  std::string reason;              // needs-attention: why
};

/// One entry per test of the suite, in suite order.
struct CoTransformReport {
  std::vector<TestDisposition> tests;

  const TestDisposition* find(const std::string& test) const;
};

/// Raised for steps naming elements that do not exist or that are malformed
/// (code "unknown-element" / "invalid-step"), and by `apply` for blocked
/// steps (code "blocked-refactoring").
class RefactorError : public std::runtime_error {
 public:
  RefactorError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Evaluates the context conditions of `step` against `model` and `suite`.
/// Throws RefactorError for unknown elements.
ConditionReport check_conditions(const Model& model, const TestSuite& suite,
                                 const Refactoring& step);

struct Applied {
  Model model;
  TestSuite suite;
  CoTransformReport report;
};

/// Applies an applicable step, co-transforming the suite. Inputs are never
/// modified. Throws RefactorError("blocked-refactoring") when a condition is
/// violated or the result would not validate.
Applied apply(const Model& model, const TestSuite& suite, const Refactoring& step);

struct ScriptResult {
  Model model;
  TestSuite suite;
  std::vector<ConditionReport> conditions;  // one per step checked
  std::vector<CoTransformReport> reports;   // one per step applied
  /// Per test over all steps: needs-attention wins over adapted.
  CoTransformReport combined;
  std::optional<std::size_t> blocked_at;  // 1-based
  std::string blocked_reason;

  bool ok() const { return !blocked_at; }
};

/// Applies the steps in order, each checked against the intermediate model.
/// On the first blocked step nothing is applied: the result holds the inputs.
ScriptResult apply_script(const Model& model, const TestSuite& suite,
                          const std::vector<Refactoring>& steps);

}  // namespace agm
