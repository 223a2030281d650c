#pragma once

// Random generators shared by the property tests and the acceptance binary.

#include <random>
#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/ocl.hpp"
#include "agm/space.hpp"
#include "agm/testcase.hpp"

namespace agmtest {

using Rng = std::mt19937_64;

// ---- syntax only (round-trip) ---------------------------------------------
// Arbitrary ASTs the grammar can express; no attempt at well-typedness.

agm::Expr random_expr(Rng& rng, int depth);
agm::Model random_model(Rng& rng);
agm::TestSuite random_suite(Rng& rng);
std::vector<agm::Refactoring> random_script(Rng& rng);

// ---- OCL over a fixed small world ------------------------------------------
//
//   Item{x, flag, label, statechart A/B}, Special extends Item{y},
//   Box{cap}; Box.items (*) / Item.box (0..1); Item.next / Item.prev (0..1).
// Query methods: Item.total (overridden in Special), Item.over(k), Box.room.

const agm::Model& ocl_world();

struct OclCase {
  agm::ObjectSpace space;
  agm::Env env;  // i0, i1, self: items; b0: a box
  agm::Expr expr;
};

/// Space of 2..max_objects objects (at least one item and one box), random
/// attribute values including overflow-prone extremes, random links with an
/// occasional multiplicity violation.
agm::ObjectSpace random_world_space(Rng& rng, int max_objects);
agm::Env random_world_env(Rng& rng, const agm::ObjectSpace& space);
/// Mostly well-typed expression of the given nesting depth over the world;
/// about one leaf in thirty has the wrong type on purpose.
agm::Expr random_world_expr(Rng& rng, int depth);
OclCase random_ocl_case(Rng& rng, int depth, int max_objects);

// ---- statecharts -----------------------------------------------------------

/// Flat deterministic statechart on class `Machine` with published void
/// triggers; unguarded.
agm::Model random_statechart_model(Rng& rng, int max_states, int max_transitions);

// ---- refactoring triples ---------------------------------------------------

struct PullUpCase {
  agm::Model model;
  agm::TestSuite suite;  // one published-only acceptance test, passing
  agm::Refactoring step;  // applicable pull-up that the test does not mention
};

PullUpCase random_pull_up_case(Rng& rng);

}  // namespace agmtest
