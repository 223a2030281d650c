#include <doctest.h>

#include <regex>
#include <set>

#include "agm/refactor.hpp"
#include "agm/syntax.hpp"
#include "agm/testkit.hpp"
#include "agm/validate.hpp"
#include "gen.hpp"
#include "load.hpp"

using namespace agm;
using agmtest::script_from;

namespace {

const Model& person() {
  static const Model m = agmtest::model_file("person.agm");
  return m;
}
const TestSuite& person_tests() {
  static const TestSuite s = agmtest::suite_file("person.agt", person());
  return s;
}

Refactoring step(const std::string& text, const Model& m = person()) {
  auto steps = script_from(text, m);
  REQUIRE(steps.size() == 1);
  return steps[0];
}

std::set<std::string> attr_names(const Model& m, const std::string& cls) {
  std::set<std::string> out;
  for (const auto& a : effective_attributes(m, cls)) out.insert(a.name);
  return out;
}

/// Body text of every (class, method) pair the model resolves.
std::map<std::pair<std::string, std::string>, std::string> dispatch_table(const Model& m) {
  std::map<std::pair<std::string, std::string>, std::string> out;
  for (const auto& c : m.classes)
    for (const auto* meth : effective_methods(m, c.name)) {
      const MethodDef& r = resolve_method(m, c.name, meth->name);
      std::string text;
      if (r.body)
        for (const auto& s : *r.body) text += print_expr(s.value) + ";";
      out[{c.name, meth->name}] = text;
    }
  return out;
}

std::size_t count_word(const std::string& text, const std::string& word) {
  std::regex re("\\b" + word + "\\b");
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST_SUITE("refactor") {
  TEST_CASE("pull up an attribute no sibling declares") {
    auto r = check_conditions(person(), person_tests(), step("pull_up_attr Guest.name -> Person default \"anon\";"));
    CHECK(r.applicable());
  }

  TEST_CASE("C1: a sibling already declares the name") {
    Model clash = agmtest::model_file("name_clash.agm");
    auto r = check_conditions(clash, person_tests(), step("pull_up_attr Guest.name -> Person default \"anon\";", clash));
    CHECK_FALSE(r.applicable());
    CHECK(r.has("C1"));
    CHECK_THROWS_AS(apply(clash, person_tests(), r.step), RefactorError);
  }

  TEST_CASE("C2: merged declarations need one type") {
    Model m = agmtest::model_from(
        "class P {}\nclass A extends P { attr tag: Int }\nclass B extends P { attr tag: String }");
    auto r = check_conditions(m, {}, step("pull_up_attr A.tag -> P default 0 merge;", m));
    CHECK(r.has("C2"));
    CHECK_FALSE(r.has("C1"));

    Model same = agmtest::model_from(
        "class P {}\nclass A extends P { attr tag: Int }\nclass B extends P { attr tag: Int }");
    auto ok = check_conditions(same, {}, step("pull_up_attr A.tag -> P default 0 merge;", same));
    CHECK(ok.applicable());
    Applied out = apply(same, {}, ok.step);
    CHECK(out.model.find_class("P")->find_attribute("tag"));
    CHECK_FALSE(out.model.find_class("A")->find_attribute("tag"));
    CHECK_FALSE(out.model.find_class("B")->find_attribute("tag"));
  }

  TEST_CASE("C3: body uses a subclass-only attribute") {
    auto r = check_conditions(person(), person_tests(),
                              step(agmtest::fixture("subclass_only.agr")));
    CHECK(r.has("C3"));
    CHECK(r.violations.size() == 1);
  }

  TEST_CASE("C4: signature conflict at the target") {
    Model m = agmtest::model_from(
        "class P { method f(): Int { return 1; } }\nclass A extends P { method g(): Int { return 2; } }\n"
        "class B extends P { method g(x: Int): Int { return x; } }");
    auto r = check_conditions(m, {}, step("pull_up_method A.g -> P variant override;", m));
    CHECK(r.has("C4"));
  }

  TEST_CASE("C5: abstract signature needs every concrete subclass to implement it") {
    Model m = agmtest::model_from(
        "class P {}\nclass A extends P { method g(): Int { return 2; } }\nclass B extends P {}");
    CHECK(check_conditions(m, {}, step("pull_up_method A.g -> P variant abstract;", m)).has("C5"));

    Model full = agmtest::model_from(
        "class P {}\nclass A extends P { method g(): Int { return 2; } }\n"
        "class B extends P { method g(): Int { return 3; } }");
    auto ok = check_conditions(full, {}, step("pull_up_method A.g -> P variant abstract;", full));
    CHECK(ok.applicable());
    // Instantiating the target would now fail.
    TestSuite uses_p = agmtest::suite_from("test unit T { setup { p = new P{}; } driver {} oracle {} }", full);
    CHECK(check_conditions(full, uses_p, ok.step).has("C5"));
  }

  TEST_CASE("C6: rename collisions, including inherited names") {
    CHECK(check_conditions(person(), {}, step("rename_attr Guest.name -> passwd;")).has("C6"));
    CHECK(check_conditions(person(), {}, step("rename_attr Person.passwd -> email;")).has("C6"));
    CHECK(check_conditions(person(), {}, step("rename_method Guest.login -> getLoginCount;")).has("C6"));
    CHECK(check_conditions(person(), {}, step("rename_class Guest -> Member;")).has("C6"));
    CHECK(check_conditions(person(), {}, step("rename_attr Guest.name -> nick;")).applicable());
  }

  TEST_CASE("unknown elements") {
    PullUpAttribute bad{"Guest", "nothing", "Person", Expr::int_lit(0), false, {}};
    CHECK_THROWS_AS(check_conditions(person(), {}, bad), RefactorError);
  }

  TEST_CASE("pull_up_attr co-transforms setups of gaining classes") {
    Refactoring r = step("pull_up_attr Guest.name -> Person default \"anon\";");
    Applied out = apply(person(), person_tests(), r);
    CHECK(validate_model(out.model).clean());
    CHECK(resolve_tests(out.suite, out.model).empty());

    auto* mp = out.report.find("MemberPassword");
    auto* mc = out.report.find("MixedCrowd");
    REQUIRE(mp);
    REQUIRE(mc);
    CHECK(mp->disposition == Disposition::Adapted);
    CHECK(mc->disposition == Disposition::Adapted);
    CHECK(mc->edits.size() == 2);  // p and m, not g
    CHECK(out.report.find("GuestLogin")->disposition == Disposition::Unchanged);
    CHECK(out.report.find("GuestLocksOut")->disposition == Disposition::Unchanged);

    const SetupObject* m = out.suite.tests[2].setup.find("m");
    REQUIRE(m);
    REQUIRE(m->inits.size() == 2);
    CHECK(m->inits.back().name == "name");
    CHECK(m->inits.back().value == Expr::string_lit("anon"));
    // Unchanged tests are textually identical.
    CHECK(out.suite.tests[0] == person_tests().tests[0]);
    CHECK(out.suite.tests[3] == person_tests().tests[3]);
    // Inputs untouched.
    CHECK(person().find_class("Guest")->find_attribute("name"));
  }

  TEST_CASE("effective attribute law") {
    Refactoring r = step("pull_up_attr Guest.name -> Person default \"anon\";");
    Applied out = apply(person(), person_tests(), r);
    CHECK(attr_names(out.model, "Guest") == attr_names(person(), "Guest"));
    for (const char* c : {"Person", "Member"}) {
      auto before = attr_names(person(), c);
      before.insert("name");
      CHECK(attr_names(out.model, c) == before);
    }
  }

  TEST_CASE("idempotent blocking") {
    Refactoring r = step("pull_up_attr Guest.name -> Person default \"anon\";");
    Applied out = apply(person(), person_tests(), r);
    auto again = check_conditions(out.model, out.suite, r);
    CHECK(again.has("C1"));
    CHECK_THROWS_AS(apply(out.model, out.suite, r), RefactorError);
  }

  TEST_CASE("pull_up_method override preserves dispatch") {
    Refactoring r = step(agmtest::fixture("pull_up_check.agr"));
    auto before = dispatch_table(person());
    Applied out = apply(person(), person_tests(), r);
    CHECK(validate_model(out.model).clean());
    CHECK(out.model.find_class("Person")->find_method("checkPasswd"));
    CHECK_FALSE(out.model.find_class("Member")->find_method("checkPasswd"));
    CHECK(out.model.find_class("Guest")->find_method("checkPasswd"));
    auto after = dispatch_table(out.model);
    for (const auto& [key, body] : before) {
      CAPTURE(key.first + "." + key.second);
      REQUIRE(after.count(key));
      CHECK(after.at(key) == body);
    }
    for (const auto& d : out.report.tests) CHECK(d.disposition == Disposition::Unchanged);
  }

  TEST_CASE("pull_up_method abstract leaves bodies in place") {
    Model full = agmtest::model_from(
        "class P {}\nclass A extends P { method g(): Int { return 2; } }\n"
        "class B extends P { method g(): Int { return 3; } }");
    Applied out = apply(full, {}, step("pull_up_method A.g -> P variant abstract;", full));
    const MethodDef* g = out.model.find_class("P")->find_method("g");
    REQUIRE(g);
    CHECK(g->is_abstract);
    CHECK(out.model.find_class("A")->find_method("g"));
    CHECK(out.model.find_class("B")->find_method("g"));
  }

  TEST_CASE("rename of an unreferenced attribute is a one-declaration edit") {
    Applied out = apply(person(), person_tests(), step("rename_attr Member.email -> mail;"));
    Model expected = person();
    expected.find_class("Member")->attributes[0].name = "mail";
    CHECK(out.model == expected);
  }

  TEST_CASE("renames are bijective on references") {
    struct Case {
      const char* script;
      const char* old_name;
      const char* new_name;
    };
    const Case cases[] = {{"rename_attr Guest.loginCount -> logins;", "loginCount", "logins"},
                          {"rename_method Person.checkPasswd -> verify;", "checkPasswd", "verify"},
                          {"rename_class Guest -> Visitor;", "Guest", "Visitor"},
                          {"rename_attr Person.passwd -> pin;", "passwd", "pin"}};
    Model m = apply(person(), person_tests(), step(agmtest::fixture("pull_up_check.agr"))).model;
    TestSuite s = person_tests();
    for (const auto& c : cases) {
      CAPTURE(c.script);
      std::string before = print_model(m) + print_tests(s);
      REQUIRE(count_word(before, c.new_name) == 0);
      Applied out = apply(m, s, step(c.script, m));
      std::string after = print_model(out.model) + print_tests(out.suite);
      CHECK(count_word(after, c.old_name) == 0);
      CHECK(count_word(after, c.new_name) == count_word(before, c.old_name));
      CHECK(validate_model(out.model).clean());
      for (const auto& t : run_suite(out.model, out.suite.tests)) CHECK(t.status == Status::Pass);
    }
  }

  TEST_CASE("needs-attention when a pattern constrains the moved attribute") {
    Model m = agmtest::model_from(
        "class P {}\nclass A extends P { attr v: Int }\nclass B extends P {}");
    // Written ahead of the move, so it only parses syntactically.
    auto parsed = parse_tests_syntax(
        "test unit T { setup { b = new B{}; } driver {} oracle { pattern { x: B{v = 0} } } }\n"
        "test unit U { setup { a = new A{v = 1}; } driver {} oracle { pattern { y: A{v = 1} } } }");
    REQUIRE(parsed.ok());
    Applied out = apply(m, parsed.suite, step("pull_up_attr A.v -> P default 0;", m));
    CHECK(out.report.tests[0].disposition == Disposition::NeedsAttention);
    CHECK(out.report.tests[0].reason.find("'v'") != std::string::npos);
    CHECK(out.report.tests[1].disposition == Disposition::Unchanged);
    // The pattern itself is never edited.
    CHECK(out.suite.tests[0].pattern == parsed.suite.tests[0].pattern);
  }

  TEST_CASE("scripts") {
    // Empty script returns the inputs.
    ScriptResult empty = apply_script(person(), person_tests(), {});
    CHECK(empty.ok());
    CHECK(empty.model == person());
    CHECK(empty.suite == person_tests());

    // Pull up, then rename at the new location.
    auto steps = script_from("pull_up_attr Guest.name -> Person default \"anon\";\nrename_attr Person.name -> title;", person());
    ScriptResult two = apply_script(person(), person_tests(), steps);
    REQUIRE(two.ok());
    CHECK(two.model.find_class("Person")->find_attribute("title"));
    CHECK_FALSE(two.model.find_class("Guest")->find_attribute("name"));
    CHECK(two.reports.size() == 2);

    // A blocked first step aborts everything.
    Model clash = agmtest::model_file("name_clash.agm");
    auto blocked_steps =
        script_from("pull_up_attr Guest.name -> Person default \"anon\";\nrename_attr Guest.loginCount -> n;", clash);
    ScriptResult blocked = apply_script(clash, person_tests(), blocked_steps);
    CHECK_FALSE(blocked.ok());
    CHECK(blocked.blocked_at == 1u);
    CHECK(blocked.model == clash);
    CHECK(blocked.suite == person_tests());

    // A later step blocked by an earlier one also aborts.
    auto late = script_from("rename_attr Guest.loginCount -> n;\nrename_attr Guest.name -> n;", person());
    ScriptResult l = apply_script(person(), person_tests(), late);
    CHECK(l.blocked_at == 2u);
    CHECK(l.model == person());
  }

  TEST_CASE("generated pull-ups keep models well-formed") {
    agmtest::Rng rng(41);
    for (int i = 0; i < 40; ++i) {
      auto c = agmtest::random_pull_up_case(rng);
      Applied out = apply(c.model, c.suite, c.step);
      CHECK(validate_model(out.model).clean());
      CHECK(resolve_tests(out.suite, out.model).empty());
    }
  }
}
