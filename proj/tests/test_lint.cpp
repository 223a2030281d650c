#include <doctest.h>

#include "agm/lint.hpp"
#include "load.hpp"

using namespace agm;

namespace {

const Model& shop() {
  static const Model m = agmtest::model_file("lint/shop.agm");
  return m;
}

std::vector<std::string> rules(const std::string& file, LintOptions opt = {}) {
  TestSuite s = agmtest::suite_file("lint/" + file, shop());
  std::vector<std::string> out;
  for (const auto& t : s.tests)
    for (const auto& f : lint_acceptance(shop(), t, opt)) out.push_back(f.rule);
  return out;
}

}  // namespace

TEST_SUITE("lint") {
  TEST_CASE("each violating fixture is flagged with its rule only") {
    for (int k = 1; k <= 6; ++k) {
      std::string rule = "L" + std::to_string(k);
      CAPTURE(rule);
      CHECK(rules(rule + "_bad.agt") == std::vector<std::string>{rule});
      CHECK(rules(rule + "_ok.agt").empty());
    }
  }

  TEST_CASE("only point equality is advisory") {
    for (int k = 1; k <= 6; ++k) {
      std::string rule = "L" + std::to_string(k);
      TestSuite s = agmtest::suite_file("lint/" + rule + "_bad.agt", shop());
      for (const auto& f : lint_acceptance(shop(), s.tests[0])) CHECK(f.advisory == (k == 3));
    }
  }

  TEST_CASE("L1 threshold is a strict bound") {
    // Two of three Shop attributes pinned: 0.67.
    CHECK(rules("L1_bad.agt", LintOptions{0.7}).empty());
    CHECK(rules("L1_bad.agt", LintOptions{0.6}) == std::vector<std::string>{"L1"});
    // One of three: 0.33, fires only below that.
    CHECK(rules("L1_ok.agt", LintOptions{0.3}) == std::vector<std::string>{"L1"});
  }

  TEST_CASE("glass-box tests are not linted") {
    TestCase t = agmtest::test_from(
        "test unit U { setup { s = new Shop{}; } driver { s.restock(1); } oracle { assert s.stock == 1; } }", shop());
    CHECK(lint_acceptance(shop(), t).empty());
  }

  TEST_CASE("published border") {
    TestSuite bad = agmtest::suite_file("lint/L6_bad.agt", shop());
    TestSuite ok = agmtest::suite_file("lint/L6_ok.agt", shop());
    CHECK_FALSE(published_only(shop(), bad.tests[0]));
    CHECK(published_only(shop(), ok.tests[0]));

    // Published method on an unpublished class still crosses the border.
    TestCase t = agmtest::test_from(
        "test acceptance Tidy { setup { b = new Backroom{}; } driver { b.tidy(); } oracle {} }", shop());
    auto f = lint_acceptance(shop(), t);
    REQUIRE(f.size() == 1);
    CHECK(f[0].rule == "L6");
    CHECK(f[0].name == "unpublished-target");
    CHECK_FALSE(published_only(shop(), t));
  }

  TEST_CASE("findings carry the test name and a location") {
    TestSuite s = agmtest::suite_file("lint/L5_bad.agt", shop());
    auto f = lint_acceptance(shop(), s.tests[0]);
    REQUIRE(f.size() == 1);
    CHECK(f[0].test == "InternalMessage");
    CHECK(f[0].location.line > 1);
    CHECK(f[0].str().find("L5") != std::string::npos);
  }
}
