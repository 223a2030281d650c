#include <doctest.h>

#include "agm/runtime.hpp"
#include "agm/syntax.hpp"
#include "load.hpp"

using namespace agm;

namespace {

const Model& auction() {
  static const Model m = agmtest::model_file("auction.agm");
  return m;
}

Setup setup_of(const Model& m, const std::string& body) {
  return agmtest::test_from("test unit T { setup { " + body + " } driver {} oracle {} }", m).setup;
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const EvalError& e) {
    return e.kind();
  }
  FAIL("expected an evaluation error");
  return ErrorKind::TypeError;
}

/// Call events minus return events, checked prefix by prefix.
bool balanced(const Trace& t) {
  long depth = 0;
  for (const auto& e : t) {
    depth += e.kind == TraceEvent::Call ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

}  // namespace

TEST_SUITE("runtime") {
  TEST_CASE("instantiate the auction setup") {
    ObjectSpace s = instantiate(auction(), setup_of(auction(), "a = new Auction{closingTime = 100, extensionTime = 10};"));
    ObjectSpace expected;
    ObjRef a = expected.create("Auction", "a");
    expected.at(a).attrs = {{"closingTime", std::int64_t{100}}, {"extensionTime", std::int64_t{10}}};
    expected.at(a).state = "Open";
    CHECK(s == expected);
  }

  TEST_CASE("empty setup gives an empty space") { CHECK(instantiate(auction(), Setup{}).size() == 0); }

  TEST_CASE("primitive defaults") {
    ObjectSpace s = instantiate(auction(), setup_of(auction(), "p = new Person{}; b = new Bid{};"));
    CHECK(s.at(ObjRef{0}).attrs.at("name") == Value{std::string{}});
    CHECK(s.at(ObjRef{1}).attrs.at("time") == Value{std::int64_t{0}});
  }

  TEST_CASE("two links on a single end") {
    Model m = agmtest::model_file("mutation/bank.agm");
    Setup s = setup_of(m, "s = new Savings{}; l1 = new Log{}; l2 = new Log{}; link s.log += l1; link s.log += l2;");
    CHECK(error_of([&] { instantiate(m, s); }) == ErrorKind::MultiplicityViolation);
  }

  TEST_CASE("handleBid moves the closing time") {
    ObjectSpace s = instantiate(auction(), setup_of(auction(),
                                                    "a = new Auction{closingTime = 100, extensionTime = 10};"
                                                    "b = new Bid{time = 95, amount = 500};"));
    CallOutcome r = call(auction(), s, ObjRef{0}, "handleBid", {ObjRef{1}});
    REQUIRE_FALSE(r.error);
    CHECK(r.space.at(ObjRef{0}).attrs.at("closingTime") == Value{std::int64_t{105}});
    CHECK(r.space.at(ObjRef{0}).state == "Open");
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].kind == TraceEvent::Call);
    CHECK_FALSE(r.trace[0].caller);
    CHECK(r.trace[0].method == "handleBid");
    CHECK(r.trace[0].args == std::vector<Value>{ObjRef{1}});
    CHECK(r.trace[1].kind == TraceEvent::Return);
    // Input untouched.
    CHECK(s.at(ObjRef{0}).attrs.at("closingTime") == Value{std::int64_t{100}});
  }

  TEST_CASE("query returning a constant leaves the space alone") {
    Model m = agmtest::model_from("class K { method one(): Int { return 1; } }");
    ObjectSpace s = instantiate(m, setup_of(m, "k = new K{};"));
    CallOutcome r = call(m, s, ObjRef{0}, "one", {});
    REQUIRE(r.value);
    CHECK(*r.value == Value{std::int64_t{1}});
    CHECK(r.space == s);
  }

  TEST_CASE("unbounded recursion exhausts the budget") {
    Model m = agmtest::model_from("class K { method loop() { self.loop(); } }");
    ObjectSpace s = instantiate(m, setup_of(m, "k = new K{};"));
    CallOutcome r = call(m, s, ObjRef{0}, "loop", {});
    REQUIRE(r.error);
    CHECK(r.error->kind() == ErrorKind::BudgetExhausted);
    CHECK(r.trace.size() <= 1001);
  }

  TEST_CASE("step budget") {
    Model m = agmtest::model_from(
        "class K { attr n: Int method spin(k: Int) { if (k > 0) { self.n = self.n + 1; self.spin(k - 1); } } }");
    ObjectSpace s = instantiate(m, setup_of(m, "k = new K{};"));
    ExecOptions small;
    small.budget.max_steps = 50;
    CHECK_FALSE(call(m, s, ObjRef{0}, "spin", {std::int64_t{5}}, small).error);
    auto r = call(m, s, ObjRef{0}, "spin", {std::int64_t{500}}, small);
    REQUIRE(r.error);
    CHECK(r.error->kind() == ErrorKind::BudgetExhausted);
  }

  TEST_CASE("no enabled transition") {
    ObjectSpace s = instantiate(auction(), setup_of(auction(), "a = new Auction{};"));
    s.at(ObjRef{0}).state = "Closed";
    CallOutcome r = call(auction(), s, ObjRef{0}, "close", {});
    REQUIRE(r.error);
    CHECK(r.error->kind() == ErrorKind::NoEnabledTransition);

    ExecOptions lenient;
    lenient.ignore_unexpected_events = true;
    CHECK_FALSE(call(auction(), s, ObjRef{0}, "close", {}, lenient).error);
  }

  TEST_CASE("guard false means no transition") {
    ObjectSpace s = instantiate(auction(), setup_of(auction(),
                                                    "a = new Auction{closingTime = 100, extensionTime = 10};"
                                                    "b = new Bid{time = 150};"));
    CallOutcome r = call(auction(), s, ObjRef{0}, "handleBid", {ObjRef{1}});
    REQUIRE(r.error);
    CHECK(r.error->kind() == ErrorKind::NoEnabledTransition);
    CHECK(r.space.at(ObjRef{0}).attrs.at("closingTime") == Value{std::int64_t{100}});
  }

  TEST_CASE("overlapping guards are nondeterministic") {
    Model m = agmtest::model_from(
        "class K { method go(n: Int) {} statechart { initial A; state A; state B; state C; "
        "A -> B on go [n > 0]; A -> C on go [n > 1]; } }");
    ObjectSpace s = instantiate(m, setup_of(m, "k = new K{};"));
    CHECK_FALSE(call(m, s, ObjRef{0}, "go", {std::int64_t{1}}).error);
    auto r = call(m, s, ObjRef{0}, "go", {std::int64_t{2}});
    REQUIRE(r.error);
    CHECK(r.error->kind() == ErrorKind::NondeterministicStatechart);
  }

  TEST_CASE("abstract methods and classes") {
    Model m = agmtest::model_from(
        "class Shape { abstract method area(): Int }\n"
        "class Sq extends Shape { attr s: Int method area(): Int { return self.s * self.s; } }");
    CHECK(error_of([&] { instantiate(m, setup_of(m, "x = new Shape{};")); }) == ErrorKind::AbstractInstantiation);
    ObjectSpace s = instantiate(m, setup_of(m, "x = new Sq{s = 4};"));
    auto r = call(m, s, ObjRef{0}, "area", {});
    REQUIRE(r.value);
    CHECK(*r.value == Value{std::int64_t{16}});
    CHECK(call(m, s, ObjRef{0}, "perimeter", {}).error->kind() == ErrorKind::NoSuchMethod);
  }

  TEST_CASE("object attributes need a value") {
    Model m = agmtest::model_from("class P {}\nclass Q { attr p: P }");
    CHECK(error_of([&] { instantiate(m, setup_of(m, "q = new Q{};")); }) == ErrorKind::MissingRequiredAttribute);
    CHECK(instantiate(m, setup_of(m, "q = new Q{p = x}; x = new P{};")).size() == 2);
  }

  TEST_CASE("nested calls are traced and balanced") {
    Model m = agmtest::model_file("mutation/bank.agm");
    ObjectSpace s = instantiate(m, setup_of(m, "s = new Savings{balance = 200, rate = 10}; lg = new Log{}; link s.log += lg;"));
    CallOutcome r = call(m, s, ObjRef{0}, "addInterest", {});
    REQUIRE_FALSE(r.error);
    CHECK(balanced(r.trace));
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace[1].method == "note");
    CHECK(r.trace[1].caller == ObjRef{0});
    CHECK(r.trace[1].args == std::vector<Value>{std::int64_t{220}});
    CHECK(r.space.at(ObjRef{1}).attrs.at("count") == Value{std::int64_t{1}});
  }

  TEST_CASE("failed calls keep a prefix of the trace") {
    Model m = agmtest::model_from("class K { method boom(): Int { return 1 / 0; } method outer() { self.boom(); } }");
    ObjectSpace s = instantiate(m, setup_of(m, "k = new K{};"));
    auto r = call(m, s, ObjRef{0}, "outer", {});
    REQUIRE(r.error);
    CHECK(r.error->kind() == ErrorKind::DivisionByZero);
    REQUIRE(r.trace.size() >= 2);
    CHECK(r.trace[1].method == "boom");
  }

  TEST_CASE("execution is deterministic") {
    Model m = agmtest::model_file("mutation/bank.agm");
    ObjectSpace s = instantiate(m, setup_of(m, "s = new Savings{balance = 250, rate = 5}; lg = new Log{}; link s.log += lg;"));
    auto a = call(m, s, ObjRef{0}, "addInterest", {});
    auto b = call(m, s, ObjRef{0}, "addInterest", {});
    CHECK(a.trace == b.trace);
    CHECK(a.space.serialize() == b.space.serialize());
  }

  TEST_CASE("transition observer") {
    Model m = agmtest::model_file("mutation/bank.agm");
    ObjectSpace s = instantiate(m, setup_of(m, "a = new Account{balance = 5};"));
    std::vector<std::string> fired;
    ExecOptions opt;
    opt.on_transition = [&](ObjRef, const Transition& t) { fired.push_back(t.source + ">" + t.target); };
    Interpreter in(m, s, opt);
    in.call(std::nullopt, ObjRef{0}, "deposit", {std::int64_t{1}});
    in.call(std::nullopt, ObjRef{0}, "freeze", {});
    CHECK(fired == std::vector<std::string>{"Active>Active", "Active>Frozen"});
    CHECK(s.at(ObjRef{0}).state == "Frozen");
  }
}
