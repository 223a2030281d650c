#include "load.hpp"

#include <stdexcept>

#include "agm/syntax.hpp"
#include "agm/validate.hpp"
#include "cli.hpp"

#ifndef AGM_FIXTURES
#error "AGM_FIXTURES must name the fixture directory"
#endif

namespace agmtest {

using namespace agm;

std::string fixture_path(const std::string& relative) {
  return std::string(AGM_FIXTURES) + "/" + relative;
}

std::string fixture(const std::string& relative) { return read_text(fixture_path(relative)); }

Model model_from(const std::string& text) {
  ModelParse p = parse_model(text, "<test>");
  if (!p.ok()) throw std::runtime_error(p.diagnostics.front().str());
  auto report = validate_model(p.model);
  if (!report.clean()) throw std::runtime_error(report.findings.front().str());
  return std::move(p.model);
}

Model model_file(const std::string& relative) { return model_from(fixture(relative)); }

TestSuite suite_from(const std::string& text, const Model& model) {
  TestsParse p = parse_tests(text, model, "<test>");
  if (!p.ok()) throw std::runtime_error(p.diagnostics.front().str());
  return std::move(p.suite);
}

TestSuite suite_file(const std::string& relative, const Model& model) {
  return suite_from(fixture(relative), model);
}

TestCase test_from(const std::string& text, const Model& model) {
  TestSuite s = suite_from(text, model);
  if (s.tests.size() != 1) throw std::runtime_error("expected exactly one test");
  return std::move(s.tests.front());
}

std::vector<Refactoring> script_from(const std::string& text, const Model& model) {
  ScriptParse p = parse_refactorings(text, model, "<test>");
  if (!p.ok()) throw std::runtime_error(p.diagnostics.front().str());
  return std::move(p.steps);
}

Expr expr_from(const std::string& text) {
  Diagnostics d;
  Expr e = parse_expr(text, d);
  if (!d.empty()) throw std::runtime_error(d.front().str());
  return e;
}

}  // namespace agmtest
