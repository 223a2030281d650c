// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Limits and sample sizes are fixed here.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "agm/derive.hpp"
#include "agm/invariance.hpp"
#include "agm/lint.hpp"
#include "agm/refactor.hpp"
#include "agm/syntax.hpp"
#include "agm/testkit.hpp"
#include "agm/validate.hpp"
#include "cli.hpp"
#include "gen.hpp"
#include "load.hpp"
#include "oracle.hpp"

using namespace agm;
namespace fs = std::filesystem;

namespace {

constexpr double kAuctionSeconds = 1.0;
constexpr double kRoundTripSeconds = 30.0;
constexpr double kCommuteSeconds = 60.0;
constexpr int kRoundTripItems = 1200;
constexpr int kOclCases = 500;
constexpr int kOclDepth = 4;
constexpr int kOclObjects = 5;
constexpr int kTriples = 200;
constexpr int kCharts = 50;
constexpr int kChartStates = 8;
constexpr int kChartTransitions = 16;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fx(const std::string& rel) { return std::string(AGM_FIXTURES) + "/" + rel; }

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// 1 -------------------------------------------------------------------------
Outcome auction() {
  auto t0 = Clock::now();
  Model m = agmtest::model_file("auction.agm");
  TestSuite s = agmtest::suite_file("auction.agt", m);
  TestResult ok = run_test(m, s.tests[0]);

  std::string text = agmtest::fixture("auction.agm");
  const std::string addend = "b.time + self.extensionTime";
  auto at = text.find(addend);
  text.replace(at, addend.size(), addend + " + 1");
  TestResult mutant = run_test(agmtest::model_from(text), s.tests[0]);
  double secs = since(t0);

  bool at_check = false;
  for (const auto& d : mutant.diagnostics) at_check |= d.phase == Phase::Checkpoint;
  Outcome o;
  o.pass = ok.status == Status::Pass && mutant.status == Status::Fail && at_check && secs < kAuctionSeconds;
  o.detail = std::string("original ") + to_string(ok.status) + ", mutant " + to_string(mutant.status) +
             (at_check ? " at checkpoint" : " (checkpoint did not fire)") + ", " + fixed(secs) + "s";
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome round_trip() {
  auto t0 = Clock::now();
  int items = 0, bad = 0;
  auto model_ok = [&](const Model& m) {
    ++items;
    auto p = parse_model(print_model(m));
    if (!p.ok() || !(p.model == m) || print_model(p.model) != print_model(m)) ++bad;
  };
  auto suite_ok = [&](const TestSuite& s) {
    ++items;
    auto p = parse_tests_syntax(print_tests(s));
    if (!p.ok() || !(p.suite == s)) ++bad;
  };
  auto script_ok = [&](const std::vector<Refactoring>& r) {
    ++items;
    auto p = parse_refactorings_syntax(print_refactorings(r));
    if (!p.ok() || !(p.steps == r)) ++bad;
  };

  for (const char* f : {"auction.agm", "person.agm", "name_clash.agm", "lint/shop.agm", "mutation/bank.agm"})
    model_ok(agmtest::model_file(f));
  for (const auto& e : fs::directory_iterator(fx("mutation")))
    if (e.path().extension() == ".agm") model_ok(agmtest::model_file("mutation/" + e.path().filename().string()));
  for (const char* f : {"auction.agt", "person.agt", "mutation/bank.agt"}) {
    auto p = parse_tests_syntax(agmtest::fixture(f));
    suite_ok(p.suite);
  }
  for (const auto& e : fs::directory_iterator(fx("lint")))
    if (e.path().extension() == ".agt") suite_ok(parse_tests_syntax(agmtest::read_text(e.path().string())).suite);
  for (const char* f : {"pull_up_name.agr", "pull_up_check.agr", "subclass_only.agr"})
    script_ok(parse_refactorings_syntax(agmtest::fixture(f)).steps);
  int corpus = items;

  agmtest::Rng rng(kSeed);
  for (int i = 0; i < kRoundTripItems / 3; ++i) {
    model_ok(agmtest::random_model(rng));
    suite_ok(agmtest::random_suite(rng));
    script_ok(agmtest::random_script(rng));
  }
  double secs = since(t0);
  Outcome o;
  o.pass = bad == 0 && items - corpus >= 1000 && secs < kRoundTripSeconds;
  o.detail = std::to_string(corpus) + " fixture + " + std::to_string(items - corpus) + " generated items, " +
             std::to_string(bad) + " violations, " + fixed(secs) + "s";
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome ocl_oracle() {
  agmtest::Rng rng(kSeed + 3);
  int disagree = 0, errors = 0;
  std::string first;
  for (int i = 0; i < kOclCases; ++i) {
    auto c = agmtest::random_ocl_case(rng, 1 + i % kOclDepth, kOclObjects);
    auto lib = agmtest::library_eval(agmtest::ocl_world(), c.space, c.expr, c.env);
    auto ref = agmtest::brute_eval(agmtest::ocl_world(), c.space, c.expr, c.env);
    errors += !ref.value;
    if (agmtest::describe(lib) != agmtest::describe(ref)) {
      if (!disagree) first = print_expr(c.expr) + ": " + agmtest::describe(lib) + " vs " + agmtest::describe(ref);
      ++disagree;
    }
  }
  Outcome o;
  o.pass = disagree == 0;
  o.detail = std::to_string(kOclCases) + " cases (" + std::to_string(errors) + " errors), " +
             std::to_string(disagree) + " disagreements" + (first.empty() ? "" : "; first: " + first);
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome commuting() {
  auto t0 = Clock::now();
  agmtest::Rng rng(kSeed + 4);
  int invariant = 0, total = 0;
  std::map<std::string, int> kinds;
  std::string first;
  for (int i = 0; i < kTriples; ++i) {
    auto c = agmtest::random_pull_up_case(rng);
    std::string kind = kind_name(c.step);
    if (auto* m = std::get_if<PullUpMethod>(&c.step)) kind += m->variant == PullUpVariant::Override ? "/override" : "/abstract";
    ++kinds[kind];
    InvarianceReport r = verify_invariance(c.model, c.suite, {c.step});
    if (r.tests.size() != 1 || r.tests[0].before != Status::Pass) continue;
    ++total;
    if (r.tests[0].verdict == Observation::Invariant && r.gate_pass) ++invariant;
    else if (first.empty()) first = print_refactoring(c.step) + " -> " + to_string(r.tests[0].verdict);
  }
  double secs = since(t0);
  Outcome o;
  o.pass = total >= kTriples && invariant == total && secs < kCommuteSeconds;
  std::string mix;
  for (const auto& [k, n] : kinds) mix += (mix.empty() ? "" : ", ") + k + " " + std::to_string(n);
  o.detail = std::to_string(invariant) + "/" + std::to_string(total) + " invariant (" + mix + "), " + fixed(secs) + "s" +
             (first.empty() ? "" : "; first: " + first);
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome context_conditions() {
  struct Case {
    const char* model;
    const char* script;
    const char* condition;
  };
  const Case cases[] = {{"name_clash.agm", "pull_up_name.agr", "C1"}, {"person.agm", "subclass_only.agr", "C3"}};
  Outcome o;
  for (const auto& c : cases) {
    std::string files[] = {fx(c.model), fx("person.agt"), fx(c.script)};
    std::string before[3];
    for (int k = 0; k < 3; ++k) before[k] = agmtest::read_text(files[k]);

    Model m = agmtest::model_file(c.model);
    TestSuite s = agmtest::suite_file("person.agt", m);
    Model m_copy = m;
    TestSuite s_copy = s;
    auto steps = agmtest::script_from(agmtest::fixture(c.script), m);
    ScriptResult r = apply_script(m, s, steps);
    bool blocked = !r.ok() && !r.conditions.empty() && r.conditions.back().has(c.condition);
    bool values_kept = m == m_copy && s == s_copy && r.model == m && r.suite == s;

    std::string out = agmtest::scratch_dir("accept5") + "/out";
    auto cli = agmtest::run_cli({"refactor", files[0], files[1], files[2], "--out", out});
    bool bytes_kept = !fs::exists(out);
    for (int k = 0; k < 3; ++k) bytes_kept &= agmtest::read_text(files[k]) == before[k];

    bool ok = blocked && values_kept && bytes_kept && cli.code == 1;
    o.pass &= ok;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + c.model + " blocked " +
                (blocked ? c.condition : "NOT") + (values_kept && bytes_kept ? ", inputs unchanged" : ", inputs CHANGED");
  }
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome co_transformation() {
  Model m = agmtest::model_file("person.agm");
  TestSuite s = agmtest::suite_file("person.agt", m);
  auto steps = agmtest::script_from(agmtest::fixture("pull_up_name.agr"), m);
  Applied out = apply(m, s, steps[0]);
  const Expr anon = Expr::string_lit("anon");

  // Independent expectation: objects of classes that did not have `name`.
  bool exact = true;
  std::set<std::string> expect_adapted;
  for (std::size_t i = 0; i < s.tests.size(); ++i) {
    const auto& before = s.tests[i].setup.objects;
    const auto& after = out.suite.tests[i].setup.objects;
    if (before.size() != after.size()) exact = false;
    for (std::size_t k = 0; k < before.size() && k < after.size(); ++k) {
      bool gains = before[k].class_name == "Person" || before[k].class_name == "Member";
      SetupObject want = before[k];
      if (gains) {
        want.inits.push_back({"name", anon});
        expect_adapted.insert(s.tests[i].name);
      }
      exact &= after[k] == want;
    }
    exact &= out.suite.tests[i].driver == s.tests[i].driver && out.suite.tests[i].pattern == s.tests[i].pattern &&
             out.suite.tests[i].assertions == s.tests[i].assertions;
  }
  std::set<std::string> marked;
  for (const auto& d : out.report.tests)
    if (d.disposition == Disposition::Adapted) marked.insert(d.test);
    else if (d.disposition != Disposition::Unchanged) exact = false;

  auto reparsed = parse_tests(print_tests(out.suite), out.model);
  bool valid = validate_model(out.model).clean() && reparsed.ok() && resolve_tests(out.suite, out.model).empty();
  Outcome o;
  o.pass = exact && marked == expect_adapted && valid && !marked.empty();
  o.detail = std::to_string(marked.size()) + " tests adapted (expected " + std::to_string(expect_adapted.size()) +
             "), setups " + (exact ? "exact" : "DIFFER") + ", " + (valid ? "re-validates" : "INVALID");
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome statecharts() {
  agmtest::Rng rng(kSeed + 7);
  int full = 0;
  std::size_t fired_total = 0, reachable_total = 0;
  for (int i = 0; i < kCharts; ++i) {
    Model m = agmtest::random_statechart_model(rng, kChartStates, kChartTransitions);
    const Statechart& sc = *m.classes[0].statechart;
    std::set<std::string> seen{sc.initial};
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& t : sc.transitions)
        if (seen.count(t.source) && seen.insert(t.target).second) grew = true;
    }
    std::set<std::size_t> reachable, fired;
    for (std::size_t k = 0; k < sc.transitions.size(); ++k)
      if (seen.count(sc.transitions[k].source)) reachable.insert(k);

    RunOptions opt;
    opt.exec.on_transition = [&](ObjRef, const Transition& t) {
      for (std::size_t k = 0; k < sc.transitions.size(); ++k)
        if (sc.transitions[k].source == t.source && sc.transitions[k].trigger == t.trigger) fired.insert(k);
    };
    bool green = true;
    for (const auto& t : derive_tests_from_statechart(m, "Machine", {}).tests)
      green &= run_test(m, t, opt).status == Status::Pass;
    fired_total += fired.size();
    reachable_total += reachable.size();
    if (green && fired == reachable) ++full;
  }
  Outcome o;
  o.pass = full == kCharts;
  o.detail = std::to_string(full) + "/" + std::to_string(kCharts) + " charts fully covered, " +
             std::to_string(fired_total) + "/" + std::to_string(reachable_total) + " reachable transitions fired";
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome lint_rules() {
  Outcome o;
  int right = 0;
  for (int k = 1; k <= 6; ++k) {
    std::string rule = "L" + std::to_string(k);
    auto bad = agmtest::run_cli({"lint", fx("lint/shop.agm"), fx("lint/" + rule + "_bad.agt")});
    auto ok = agmtest::run_cli({"lint", fx("lint/shop.agm"), fx("lint/" + rule + "_ok.agt")});
    bool flagged = bad.out.find(": " + rule + " ") != std::string::npos && std::count(bad.out.begin(), bad.out.end(), '\n') == 1;
    bool exit_right = bad.code == (k == 3 ? 0 : 1);
    bool clean = ok.code == 0 && ok.out.empty();
    if (flagged && exit_right && clean) ++right;
    else o.detail += rule + " wrong; ";
  }
  o.pass = right == 6;
  o.detail += std::to_string(right) + "/6 rules flagged and cleared correctly, L3 exit 0";
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome mutation_gate() {
  int caught = 0, total = 0;
  std::string missed;
  std::vector<fs::path> mutants;
  for (const auto& e : fs::directory_iterator(fx("mutation")))
    if (e.path().filename().string().rfind("m", 0) == 0 && e.path().extension() == ".agm") mutants.push_back(e.path());
  std::sort(mutants.begin(), mutants.end());
  for (const auto& p : mutants) {
    ++total;
    auto r = agmtest::run_cli({"verify", fx("mutation/bank.agm"), fx("mutation/bank.agt"), "--against", p.string()});
    if (r.code == 1 && r.out.find("gate: fail") != std::string::npos) ++caught;
    else missed += " " + p.filename().string();
  }
  Outcome o;
  o.pass = total == 10 && caught == total;
  o.detail = std::to_string(caught) + "/" + std::to_string(total) + " mutants caught" +
             (missed.empty() ? "" : "; missed:" + missed);
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome determinism() {
  std::string dir = agmtest::scratch_dir("accept10");
  agmtest::write_text(dir + "/fmt.agm", "class   Person{attr name:String}\n");
  const std::vector<std::vector<std::string>> commands = {
      {"check", fx("auction.agm"), fx("person.agm"), fx("mutation/bank.agm")},
      {"test", fx("person.agm"), fx("person.agt")},
      {"test", fx("mutation/bank.agm"), fx("mutation/bank.agt"), "--report", "json", "-j", "4"},
      {"test", fx("mutation/m06_interest_scale.agm"), fx("mutation/bank.agt"), "--dump-space"},
      {"lint", fx("lint/shop.agm"), fx("lint/L1_bad.agt"), fx("lint/L5_bad.agt")},
      {"refactor", fx("person.agm"), fx("person.agt"), fx("pull_up_name.agr"), "--out", dir + "/r"},
      {"refactor", fx("name_clash.agm"), fx("person.agt"), fx("pull_up_name.agr"), "--out", dir + "/b"},
      {"verify", fx("person.agm"), fx("person.agt"), fx("pull_up_name.agr"), "--report", "json"},
      {"verify", fx("mutation/bank.agm"), fx("mutation/bank.agt"), "--against", fx("mutation/m09_pulled_rate_reordered.agm")},
      {"fmt", fx("auction.agm"), fx("person.agt"), fx("pull_up_check.agr")},
      {"fmt", "--check", dir + "/fmt.agm"},
      {"derive", fx("mutation/bank.agm"), "--class", "Account", "--criterion", "paths:3"},
  };
  int stable = 0;
  std::string unstable;
  for (const auto& c : commands) {
    auto a = agmtest::run_cli(c);
    auto b = agmtest::run_cli(c);
    if (a.code == b.code && a.out == b.out) ++stable;
    else unstable += " " + c[0];
  }
  Outcome o;
  o.pass = stable == static_cast<int>(commands.size());
  o.detail = std::to_string(stable) + "/" + std::to_string(commands.size()) + " command runs byte-identical" +
             (unstable.empty() ? "" : "; unstable:" + unstable);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"auction fixture and checkpoint mutant", auction},
      {"parse/print round-trip", round_trip},
      {"OCL agrees with brute-force oracle", ocl_oracle},
      {"generated pull-ups commute with tests", commuting},
      {"context conditions C1 and C3 block", context_conditions},
      {"co-transformation of setups", co_transformation},
      {"statechart transition coverage", statecharts},
      {"acceptance lint rules", lint_rules},
      {"mutation gate", mutation_gate},
      {"deterministic CLI", determinism},
  };
  int failed = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << name << " -- " << o.detail << std::endl;
  }
  std::cout << (n - failed) << "/" << n << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
