#pragma once

#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/testcase.hpp"

namespace agm {

struct Criterion {
  enum Kind { States, Transitions, Paths };
  Kind kind = Transitions;
  std::size_t k = 0;  // Paths only

  /// "states", "transitions" or "paths:K".
  static std::optional<Criterion> parse(const std::string& text);
  std::string str() const;
};

struct DerivedSuite {
  std::vector<TestCase> tests;
  std::vector<std::string> unreachable_states;
  /// Problems the engineer has to resolve by hand (unpublished triggers,
  /// objects that need explicit values, ...). Not fatal.
  std::vector<std::string> warnings;
};

/// Test skeletons driving the statechart of `cls` from its initial state so
/// that together they cover the criterion for every reachable state or
/// transition. Throws ModelError("unknown-class") or
/// ModelError("no-statechart").
DerivedSuite derive_tests_from_statechart(const Model& model, const std::string& cls,
                                          const Criterion& criterion);

}  // namespace agm
