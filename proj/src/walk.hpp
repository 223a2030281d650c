#pragma once

// Typed traversal of every expression in a model or test, reporting member
// references with the static class of their receiver. Shared by renaming and
// the refactoring conditions.

#include "agm/model.hpp"
#include "agm/testcase.hpp"
#include "agm/typecheck.hpp"

namespace agm::detail {

/// Method bodies, statechart guards and invariants.
void walk_model(const Model& model, const MemberHook& hook);

/// Setup initializers, driver items, pattern constraints and assertions of
/// one test, typed against `model`.
void walk_test(const Model& model, const TestCase& test, const MemberHook& hook);

Scope test_setup_scope(const Model& model, const TestCase& test);
Scope test_oracle_scope(const Model& model, const TestCase& test);

}  // namespace agm::detail
