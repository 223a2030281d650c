#pragma once

#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/testcase.hpp"

namespace agm {

/// Rules for acceptance tests, which should observe only the published
/// border of the system:
///   L1 over-specification      pattern pins too many attributes of an object
///   L2 total-oracle            more pattern objects than setup objects
///   L3 point-equality          `==` on an Int attribute (advisory)
///   L4 direct-attribute-read   attribute read where a get/is query exists
///   L5 internal-interaction    expected message between unpublished classes
///   L6 unpublished-target      trigger on an unpublished class or method
struct LintFinding {
  std::string rule;  // "L1" .. "L6"
  std::string name;  // e.g. "over-specification"
  std::string test;
  std::string message;
  SourceLocation location;
  bool advisory = false;

  std::string str() const;
};

struct LintOptions {
  /// L1 fires when more than this fraction of an object's effective
  /// attributes is constrained.
  double l1_threshold = 0.5;
};

/// Empty for tests that are not in the acceptance category.
std::vector<LintFinding> lint_acceptance(const Model& model, const TestCase& test,
                                         const LintOptions& options = {});

/// True when the test's triggers all target published classes and methods
/// (no L6 finding). Only such tests take part in the invariance gate.
bool published_only(const Model& model, const TestCase& test);

}  // namespace agm
