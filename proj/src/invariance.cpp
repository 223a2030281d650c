#include "agm/invariance.hpp"

#include <json.hpp>
#include <sstream>

#include "agm/lint.hpp"
#include "agm/syntax.hpp"

namespace agm {

const char* to_string(Observation o) {
  switch (o) {
    case Observation::Invariant: return "invariant";
    case Observation::Broken: return "broken";
    case Observation::AdaptedPass: return "adapted-pass";
    case Observation::AdaptedFail: return "adapted-fail";
    case Observation::Attention: return "attention";
    case Observation::Excluded: return "excluded";
  }
  return "?";
}

namespace {

std::string print_one(const TestCase& t) { return print_tests(TestSuite{{t}}); }

std::string first_diagnostic(const TestResult& r) {
  if (r.diagnostics.empty()) return {};
  const auto& d = r.diagnostics.front();
  return std::string(to_string(d.phase)) + ": " + d.message;
}

/// Fills `report.tests` from before-results and, unless blocked, the run on the
/// transformed pair.
void classify(InvarianceReport& report, const Model& model, const TestSuite& suite,
              const std::vector<TestResult>& before, const Model* after_model,
              const TestSuite* after_suite, const CoTransformReport* dispositions,
              const RunOptions& options, unsigned jobs) {
  std::vector<TestResult> after;
  if (after_model) after = run_suite(*after_model, after_suite->tests, options, jobs);

  for (std::size_t i = 0; i < suite.tests.size(); ++i) {
    const TestCase& t = suite.tests[i];
    TestObservation o;
    o.name = t.name;
    o.category = t.category;
    o.before = before[i].status;
    o.gated = t.category == Category::Acceptance && published_only(model, t);
    if (const TestDisposition* d = dispositions ? dispositions->find(t.name) : nullptr) {
      o.disposition = d->disposition;
      if (d->disposition == Disposition::NeedsAttention) o.detail = d->reason;
    }
    if (!after_model) {
      o.verdict = Observation::Excluded;
      report.tests.push_back(std::move(o));
      continue;
    }
    const TestResult& a = after[i];
    o.after = a.status;
    if (o.detail.empty()) o.detail = first_diagnostic(a);
    const bool passed_after = a.status == Status::Pass;
    if (o.before != Status::Pass) o.verdict = Observation::Excluded;
    else if (o.disposition == Disposition::NeedsAttention) o.verdict = Observation::Attention;
    else if (o.disposition == Disposition::Adapted)
      o.verdict = passed_after ? Observation::AdaptedPass : Observation::AdaptedFail;
    else o.verdict = passed_after ? Observation::Invariant : Observation::Broken;
    if (o.gated && (o.verdict == Observation::Broken || o.verdict == Observation::AdaptedFail))
      report.gate_pass = false;
    report.tests.push_back(std::move(o));
  }
}

}  // namespace

InvarianceReport verify_invariance(const Model& model, const TestSuite& suite,
                                   const std::vector<Refactoring>& steps,
                                   const RunOptions& options, unsigned jobs) {
  InvarianceReport report;
  for (const auto& s : steps) report.steps.push_back(print_refactoring(s));
  std::vector<TestResult> before = run_suite(model, suite.tests, options, jobs);
  ScriptResult script = apply_script(model, suite, steps);
  if (!script.ok()) {
    report.blocked_at = script.blocked_at;
    report.blocked_reason = script.blocked_reason;
    report.gate_pass = false;
    classify(report, model, suite, before, nullptr, nullptr, nullptr, options, jobs);
    return report;
  }
  classify(report, model, suite, before, &script.model, &script.suite, &script.combined, options,
           jobs);
  return report;
}

InvarianceReport verify_outputs(const Model& model, const TestSuite& suite,
                                const Model& after_model, const TestSuite& after_suite,
                                const RunOptions& options, unsigned jobs) {
  InvarianceReport report;
  CoTransformReport dispositions;
  for (const auto& t : suite.tests) {
    TestDisposition d{t.name, Disposition::Unchanged, {}, {}};
    const TestCase* match = nullptr;
    for (const auto& u : after_suite.tests)
      if (u.name == t.name) match = &u;
    if (!match) {
      d.disposition = Disposition::NeedsAttention;
      d.reason = "test missing from the transformed suite";
    } else if (print_one(*match) != print_one(t)) {
      d.disposition = Disposition::Adapted;
      d.edits.push_back("text changed");
    }
    dispositions.tests.push_back(std::move(d));
  }
  // Run the transformed tests in the order of the original suite.
  TestSuite aligned;
  for (const auto& t : suite.tests) {
    const TestCase* match = &t;
    for (const auto& u : after_suite.tests)
      if (u.name == t.name) match = &u;
    aligned.tests.push_back(*match);
  }
  std::vector<TestResult> before = run_suite(model, suite.tests, options, jobs);
  classify(report, model, suite, before, &after_model, &aligned, &dispositions, options, jobs);
  return report;
}

std::string report_text(const InvarianceReport& report) {
  std::ostringstream os;
  for (std::size_t i = 0; i < report.steps.size(); ++i)
    os << "step " << i + 1 << ": " << report.steps[i] << "\n";
  if (report.blocked_at)
    os << "blocked-at-step " << *report.blocked_at << ": " << report.blocked_reason << "\n";
  for (const auto& t : report.tests) {
    os << to_string(t.verdict) << " " << t.name << " [" << to_string(t.category) << "] "
       << to_string(t.before) << " -> " << (t.after ? to_string(*t.after) : "-") << " ("
       << to_string(t.disposition) << (t.gated ? ", gated" : "") << ")";
    if (!t.detail.empty() && t.verdict != Observation::Invariant &&
        t.verdict != Observation::AdaptedPass)
      os << ": " << t.detail;
    os << "\n";
  }
  os << "gate: " << (report.gate_pass ? "pass" : "fail") << "\n";
  return os.str();
}

std::string report_json(const InvarianceReport& report,
                        const std::optional<std::string>& generated_at) {
  nlohmann::ordered_json j;
  j["steps"] = report.steps;
  j["tests"] = nlohmann::ordered_json::array();
  for (const auto& t : report.tests) {
    nlohmann::ordered_json o;
    o["name"] = t.name;
    o["category"] = to_string(t.category);
    o["before"] = to_string(t.before);
    o["after"] = t.after ? nlohmann::ordered_json(to_string(*t.after)) : nlohmann::ordered_json();
    o["disposition"] = to_string(t.disposition);
    o["verdict"] = to_string(t.verdict);
    o["gated"] = t.gated;
    if (!t.detail.empty()) o["detail"] = t.detail;
    j["tests"].push_back(std::move(o));
  }
  j["gate"] = report.gate_pass ? "pass" : "fail";
  if (report.blocked_at) {
    j["blocked_at_step"] = *report.blocked_at;
    j["blocked_reason"] = report.blocked_reason;
  }
  if (generated_at) j["generated_at"] = *generated_at;
  return j.dump(2) + "\n";
}

}  // namespace agm
