#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/ocl.hpp"
#include "agm/runtime.hpp"
#include "agm/space.hpp"
#include "agm/testcase.hpp"

namespace agm {

using Bindings = std::map<std::string, ObjRef>;

// ---------------------------------------------------------------------------
// Object patterns

struct PatternMatch {
  bool matched = false;
  Bindings bindings;        // seed bindings plus pattern bindings
  std::string explanation;  // first unsatisfiable constraint when unmatched
};

/// Searches for an injective assignment of pattern objects to objects of
/// `space`. A pattern object whose name is already bound in `seed` may only
/// bind that object. Subclass instances satisfy a class constraint. Attribute
/// constraints are evaluated once, in `space` under `seed`; evaluation errors
/// propagate as EvalError.
PatternMatch match_pattern(const Model& model, const ObjectPattern& pattern,
                           const ObjectSpace& space, const Bindings& seed);

// ---------------------------------------------------------------------------
// Trace matching

struct ExpectedCall {
  std::optional<ObjRef> sender;  // none: TESTER
  ObjRef receiver;
  std::string method;
  std::optional<std::vector<Value>> args;  // none: unconstrained
};

struct TraceMatch {
  bool matched = true;
  std::size_t position = 0;  // 1-based position of the first divergence
  std::string message;
};

/// Loose: `expected` is an ordered subsequence of the Call events.
/// Strict: the Call events whose sender and receiver both take part in
/// `expected` form exactly the expected sequence.
TraceMatch match_trace(const std::vector<ExpectedCall>& expected, const Trace& trace,
                       DriverMode mode);

// ---------------------------------------------------------------------------
// Test execution

enum class Phase { Setup, Driver, Checkpoint, Oracle, Invariants };
enum class Status { Pass, Fail, Error };

const char* to_string(Phase p);
const char* to_string(Status s);

struct TestDiagnostic {
  Phase phase = Phase::Setup;
  Status severity = Status::Fail;  // Fail or Error
  std::string message;
  SourceLocation location;
};

struct TestResult {
  std::string name;
  Category category = Category::Unit;
  Status status = Status::Pass;
  std::vector<TestDiagnostic> diagnostics;
  std::string final_space;  // canonical serialization, when requested
};

struct RunOptions {
  ExecOptions exec;
  bool keep_space = false;
};

/// Setup, driver, oracle, invariants. Failures are collected and the run
/// continues; an error aborts the remaining phases.
TestResult run_test(const Model& model, const TestCase& test, const RunOptions& options = {});

/// Runs `tests` with up to `jobs` worker threads; results keep the order of
/// `tests`.
std::vector<TestResult> run_suite(const Model& model, const std::vector<TestCase>& tests,
                                  const RunOptions& options = {}, unsigned jobs = 1);

}  // namespace agm
