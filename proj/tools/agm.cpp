// agm: command-line front end.
//
// Exit codes: 0 success, 1 test/gate failure or validation findings,
// 2 usage, I/O or parse errors. Diagnostics go to stderr, reports to stdout.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "agm/derive.hpp"
#include "agm/invariance.hpp"
#include "agm/lint.hpp"
#include "agm/refactor.hpp"
#include "agm/syntax.hpp"
#include "agm/testkit.hpp"
#include "agm/validate.hpp"

namespace fs = std::filesystem;
using namespace agm;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

/// Thrown to leave a command with an exit code after reporting on stderr.
struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": error: cannot read file\n";
    throw Exit{kUsage};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << path.string() << ": error: cannot write file\n";
    throw Exit{kUsage};
  }
}

void report(const Diagnostics& diags) {
  for (const auto& d : diags) std::cerr << d.str() << "\n";
}

Model load_model(const std::string& path, bool require_valid) {
  ModelParse p = parse_model(read_file(path), path);
  report(p.diagnostics);
  if (!p.ok()) throw Exit{kUsage};
  if (require_valid) {
    auto r = validate_model(p.model);
    for (const auto& f : r.findings) std::cerr << f.str() << "\n";
    if (!r.clean()) {
      std::cerr << path << ": error: model is not well formed\n";
      throw Exit{kUsage};
    }
  }
  return std::move(p.model);
}

TestSuite load_tests(const std::vector<std::string>& paths, const Model& model) {
  TestSuite suite;
  bool ok = true;
  for (const auto& path : paths) {
    TestsParse p = parse_tests_syntax(read_file(path), path);
    report(p.diagnostics);
    ok = ok && p.ok();
    for (auto& t : p.suite.tests) suite.tests.push_back(std::move(t));
  }
  if (!ok) throw Exit{kUsage};
  Diagnostics diags = resolve_tests(suite, model);
  report(diags);
  if (!diags.empty()) throw Exit{kUsage};
  return suite;
}

std::vector<Refactoring> load_script(const std::string& path, const Model& model) {
  ScriptParse p = parse_refactorings(read_file(path), model, path);
  report(p.diagnostics);
  if (!p.ok()) throw Exit{kUsage};
  return std::move(p.steps);
}

RunOptions run_options(bool ignore_unexpected) {
  RunOptions o;
  o.exec.ignore_unexpected_events = ignore_unexpected;
  if (const char* env = std::getenv("AGM_BUDGET_STEPS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (!*env || *end || v == 0) {
      std::cerr << "error: AGM_BUDGET_STEPS must be a positive integer\n";
      throw Exit{kUsage};
    }
    o.exec.budget.max_steps = static_cast<std::size_t>(v);
  }
  return o;
}

std::string timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::vector<std::string>& files) {
  int code = kOk;
  for (const auto& f : files) {
    ModelParse p = parse_model(read_file(f), f);
    report(p.diagnostics);
    if (!p.ok()) {
      code = kUsage;
      continue;
    }
    auto r = validate_model(p.model);
    for (const auto& finding : r.findings) std::cerr << finding.str() << "\n";
    if (!r.clean() && code == kOk) code = kFailed;
  }
  return code;
}

struct TestArgs {
  std::string model;
  std::vector<std::string> tests;
  std::string category;
  std::string filter;
  unsigned jobs = 1;
  std::string format = "text";
  bool dump_space = false;
  bool ignore_unexpected = false;
};

int cmd_test(const TestArgs& a) {
  Model model = load_model(a.model, true);
  TestSuite suite = load_tests(a.tests, model);
  std::optional<Category> cat;
  if (!a.category.empty()) {
    cat = parse_category(a.category);
    if (!cat) {
      std::cerr << "error: unknown category '" << a.category << "'\n";
      return kUsage;
    }
  }
  std::vector<TestCase> selected;
  for (const auto& t : suite.tests)
    if ((!cat || t.category == *cat) && t.name.find(a.filter) != std::string::npos)
      selected.push_back(t);

  RunOptions opts = run_options(a.ignore_unexpected);
  opts.keep_space = a.dump_space;
  auto results = run_suite(model, selected, opts, a.jobs);

  std::size_t passed = 0, failed = 0, errors = 0;
  for (const auto& r : results)
    (r.status == Status::Pass ? passed : r.status == Status::Fail ? failed : errors)++;

  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["tests"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      nlohmann::ordered_json t;
      t["name"] = r.name;
      t["category"] = to_string(r.category);
      t["status"] = to_string(r.status);
      t["diagnostics"] = nlohmann::ordered_json::array();
      for (const auto& d : r.diagnostics)
        t["diagnostics"].push_back({{"phase", to_string(d.phase)},
                                    {"severity", to_string(d.severity)},
                                    {"message", d.message},
                                    {"location", d.location.str()}});
      if (a.dump_space) t["space"] = r.final_space;
      j["tests"].push_back(std::move(t));
    }
    j["summary"] = {{"passed", passed}, {"failed", failed}, {"errors", errors}};
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      const char* tag = r.status == Status::Pass ? "ok" : r.status == Status::Fail ? "FAIL" : "ERROR";
      std::cout << tag << " " << r.name << " [" << to_string(r.category) << "]\n";
      for (const auto& d : r.diagnostics)
        std::cout << "  " << d.location.str() << ": " << to_string(d.phase) << ": " << d.message
                  << "\n";
      if (a.dump_space) {
        std::istringstream lines(r.final_space);
        for (std::string line; std::getline(lines, line);) std::cout << "  | " << line << "\n";
      }
    }
    std::cout << passed << " passed, " << failed << " failed, " << errors << " errors\n";
  }
  return failed + errors == 0 ? kOk : kFailed;
}

int cmd_lint(const std::string& model_path, const std::vector<std::string>& tests,
             double l1_threshold) {
  Model model = load_model(model_path, true);
  TestSuite suite = load_tests(tests, model);
  LintOptions opts;
  opts.l1_threshold = l1_threshold;
  bool blocking = false;
  for (const auto& t : suite.tests)
    for (const auto& f : lint_acceptance(model, t, opts)) {
      std::cout << f.str() << " [" << t.name << "]\n";
      blocking = blocking || !f.advisory;
    }
  return blocking ? kFailed : kOk;
}

std::string co_transform_text(const ScriptResult& r) {
  std::ostringstream os;
  for (const auto& d : r.combined.tests) {
    os << to_string(d.disposition) << " " << d.test;
    if (!d.reason.empty()) os << ": " << d.reason;
    os << "\n";
    for (const auto& e : d.edits) os << "  " << e << "\n";
  }
  return os.str();
}

int cmd_refactor(const std::string& model_path, const std::string& tests_path,
                 const std::string& script_path, const std::string& out_dir) {
  Model model = load_model(model_path, true);
  TestSuite suite = load_tests({tests_path}, model);
  auto steps = load_script(script_path, model);
  ScriptResult r = apply_script(model, suite, steps);
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    const auto& c = r.conditions[i];
    std::cout << "step " << i + 1 << ": " << print_refactoring(c.step) << " -- "
              << (c.applicable() ? "applicable" : "blocked") << "\n";
    for (const auto& v : c.violations) std::cout << "  " << v.str() << "\n";
  }
  if (!r.ok()) {
    std::cout << "blocked-at-step " << *r.blocked_at << "\n";
    std::cerr << script_path << ": error: blocked-at-step " << *r.blocked_at << ": "
              << r.blocked_reason << "\n";
    return kFailed;
  }
  std::string co = co_transform_text(r);
  std::cout << co;
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << out_dir << ": error: cannot create directory\n";
    return kUsage;
  }
  write_file(dir / fs::path(model_path).filename(), print_model(r.model));
  write_file(dir / fs::path(tests_path).filename(), print_tests(r.suite));
  write_file(dir / "cotransform.txt", co);
  return kOk;
}

int cmd_verify(const std::string& model_path, const std::string& tests_path,
               const std::string& script_path, const std::string& against,
               const std::string& against_tests, const std::string& format, bool timestamps) {
  Model model = load_model(model_path, true);
  TestSuite suite = load_tests({tests_path}, model);
  RunOptions opts = run_options(false);
  InvarianceReport rep;
  if (!against.empty()) {
    Model after = load_model(against, true);
    TestSuite after_suite = load_tests({against_tests.empty() ? tests_path : against_tests}, after);
    rep = verify_outputs(model, suite, after, after_suite, opts);
  } else {
    rep = verify_invariance(model, suite, load_script(script_path, model), opts);
  }
  if (format == "json") std::cout << report_json(rep, timestamps ? std::optional(timestamp()) : std::nullopt);
  else std::cout << report_text(rep);
  if (rep.blocked_at)
    std::cerr << script_path << ": error: blocked-at-step " << *rep.blocked_at << ": "
              << rep.blocked_reason << "\n";
  return rep.gate_pass ? kOk : kFailed;
}

/// Canonical text of a file, chosen by extension; nullopt on parse errors.
std::optional<std::string> canonical(const std::string& path) {
  std::string text = read_file(path);
  std::string ext = fs::path(path).extension().string();
  if (ext == ".agm") {
    auto p = parse_model(text, path);
    report(p.diagnostics);
    return p.ok() ? std::optional(print_model(p.model)) : std::nullopt;
  }
  if (ext == ".agt") {
    auto p = parse_tests_syntax(text, path);
    report(p.diagnostics);
    return p.ok() ? std::optional(print_tests(p.suite)) : std::nullopt;
  }
  if (ext == ".agr") {
    auto p = parse_refactorings_syntax(text, path);
    report(p.diagnostics);
    return p.ok() ? std::optional(print_refactorings(p.steps)) : std::nullopt;
  }
  std::cerr << path << ": error: unknown file kind (expected .agm, .agt or .agr)\n";
  return std::nullopt;
}

int cmd_fmt(const std::vector<std::string>& files, bool write, bool check) {
  int code = kOk;
  for (const auto& f : files) {
    auto text = canonical(f);
    if (!text) {
      code = kUsage;
      continue;
    }
    if (check) {
      if (*text != read_file(f)) {
        std::cout << "not canonical: " << f << "\n";
        if (code == kOk) code = kFailed;
      }
    } else if (write) {
      if (*text != read_file(f)) write_file(f, *text);
    } else {
      std::cout << *text;
    }
  }
  return code;
}

int cmd_derive(const std::string& model_path, const std::string& cls, const std::string& crit,
               const std::string& out) {
  Model model = load_model(model_path, true);
  auto criterion = Criterion::parse(crit);
  if (!criterion) {
    std::cerr << "error: unknown criterion '" << crit
              << "' (expected states, transitions or paths:K)\n";
    return kUsage;
  }
  DerivedSuite d;
  try {
    d = derive_tests_from_statechart(model, cls, *criterion);
  } catch (const ModelError& e) {
    std::cerr << model_path << ": error: " << e.code() << ": " << e.what() << "\n";
    return kUsage;
  }
  if (!d.unreachable_states.empty()) {
    std::cerr << model_path << ": warning: unreachable-states:";
    for (const auto& s : d.unreachable_states) std::cerr << " " << s;
    std::cerr << "\n";
  }
  for (const auto& w : d.warnings) std::cerr << model_path << ": warning: " << w << "\n";
  std::string text = print_tests(TestSuite{d.tests});
  if (out.empty()) std::cout << text;
  else {
    write_file(out, text);
    std::cout << d.tests.size() << " skeleton(s) written to " << out << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agm - executable UML models: run tests, lint, refactor and verify"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "Parse and validate model files");
  check->add_option("files", files, "Model files (.agm)")->required();

  TestArgs targs;
  auto* test = app.add_subcommand("test", "Run test suites against a model");
  test->add_option("model", targs.model, "Model file")->required();
  test->add_option("tests", targs.tests, "Test files (.agt)")->required();
  test->add_option("--category", targs.category, "Only unit, integration or acceptance tests");
  test->add_option("--filter", targs.filter, "Only tests whose name contains this text");
  test->add_option("--jobs,-j", targs.jobs, "Worker threads")->check(CLI::PositiveNumber);
  test->add_option("--report", targs.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  test->add_flag("--dump-space", targs.dump_space, "Print each final object space");
  test->add_flag("--ignore-unexpected-events", targs.ignore_unexpected,
                 "Discard calls no statechart transition accepts");

  std::string model_path, tests_path, script_path, out_dir, against, against_tests;
  std::vector<std::string> lint_tests;
  double l1 = 0.5;
  auto* lint = app.add_subcommand("lint", "Check acceptance tests against the test standards");
  lint->add_option("model", model_path, "Model file")->required();
  lint->add_option("tests", lint_tests, "Test files")->required();
  lint->add_option("--l1-threshold", l1, "Share of constrained attributes that counts as over-specified")
      ->check(CLI::Range(0.0, 1.0));

  auto* refactor = app.add_subcommand("refactor", "Apply a refactoring script");
  refactor->add_option("model", model_path, "Model file")->required();
  refactor->add_option("tests", tests_path, "Test file")->required();
  refactor->add_option("script", script_path, "Refactoring script (.agr)")->required();
  refactor->add_option("--out", out_dir, "Directory for the transformed files")->required();

  std::string vformat = "text";
  bool timestamps = false;
  auto* verify = app.add_subcommand("verify", "Check that acceptance tests observe no change");
  verify->add_option("model", model_path, "Model file")->required();
  verify->add_option("tests", tests_path, "Test file")->required();
  auto* script_opt = verify->add_option("script", script_path, "Refactoring script (.agr)");
  auto* against_opt =
      verify->add_option("--against", against, "Compare with this already transformed model");
  verify->add_option("--against-tests", against_tests, "Transformed tests for --against")
      ->needs(against_opt);
  script_opt->excludes(against_opt);
  verify->add_option("--report", vformat, "Output format")->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--timestamps", timestamps, "Add generated_at to the JSON report");

  bool write = false, fmt_check = false;
  auto* fmt = app.add_subcommand("fmt", "Print files in canonical form");
  fmt->add_option("files", files, "Files (.agm, .agt, .agr)")->required();
  auto* wflag = fmt->add_flag("--write", write, "Rewrite files in place");
  fmt->add_flag("--check", fmt_check, "Exit 1 if a file is not canonical")->excludes(wflag);

  std::string cls, criterion = "transitions", derive_out;
  auto* derive = app.add_subcommand("derive", "Derive test skeletons from a statechart");
  derive->add_option("model", model_path, "Model file")->required();
  derive->add_option("--class", cls, "Class owning the statechart")->required();
  derive->add_option("--criterion", criterion, "states, transitions or paths:K");
  derive->add_option("--out", derive_out, "Write skeletons to this .agt file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(files);
    if (*test) return cmd_test(targs);
    if (*lint) return cmd_lint(model_path, lint_tests, l1);
    if (*refactor) return cmd_refactor(model_path, tests_path, script_path, out_dir);
    if (*verify) {
      if (script_path.empty() && against.empty()) {
        std::cerr << "error: verify needs a script or --against\n";
        return kUsage;
      }
      return cmd_verify(model_path, tests_path, script_path, against, against_tests, vformat,
                        timestamps);
    }
    if (*fmt) return cmd_fmt(files, write, fmt_check);
    if (*derive) return cmd_derive(model_path, cls, criterion, derive_out);
  } catch (const Exit& e) {
    return e.code;
  }
  return kUsage;
}
