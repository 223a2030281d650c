#include "agm/testkit.hpp"

#include <atomic>
#include <set>
#include <thread>

#include "agm/syntax.hpp"

namespace agm {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Setup: return "setup";
    case Phase::Driver: return "driver";
    case Phase::Checkpoint: return "checkpoint";
    case Phase::Oracle: return "oracle";
    case Phase::Invariants: return "invariants";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

struct CompiledObject {
  const PatternObject* decl;
  std::vector<std::pair<std::string, Value>> constraints;
  std::optional<ObjRef> seeded;
};

class PatternSearch {
 public:
  PatternSearch(const Model& model, const ObjectSpace& space, const ObjectPattern& pattern,
                std::vector<CompiledObject> objects)
      : model_(model), space_(space), pattern_(pattern), objects_(std::move(objects)) {}

  bool run(Bindings& out) {
    std::vector<ObjRef> chosen;
    if (!search(0, chosen)) return false;
    for (std::size_t i = 0; i < objects_.size(); ++i) out[objects_[i].decl->name] = chosen[i];
    return true;
  }

  /// Reason recorded at the deepest point the search reached.
  const std::string& explanation() const { return why_; }

 private:
  std::string describe(const CompiledObject& o) const {
    return "'" + o.decl->name + ": " + o.decl->class_name + "'";
  }

  void note(std::size_t depth, std::string why) {
    if (why_.empty() || depth > why_depth_) {
      why_depth_ = depth;
      why_ = std::move(why);
    }
  }

  /// Empty when `r` can play pattern object `i`; otherwise the reason.
  std::string reject(std::size_t i, ObjRef r, const std::vector<ObjRef>& chosen) const {
    const CompiledObject& o = objects_[i];
    const Object& obj = space_.at(r);
    if (!is_subclass_of(model_, obj.class_name, o.decl->class_name))
      return "#" + std::to_string(r.id) + " is a " + obj.class_name + ", not a " +
             o.decl->class_name;
    for (ObjRef c : chosen)
      if (c == r) return "#" + std::to_string(r.id) + " is already bound";
    for (const auto& [attr, expected] : o.constraints) {
      auto it = obj.attrs.find(attr);
      if (it == obj.attrs.end() || !(it->second == expected))
        return attr + " = " + format_value(expected) + " expected, #" + std::to_string(r.id) +
               " has " + (it == obj.attrs.end() ? std::string("none") : format_value(it->second));
    }
    // Links whose endpoints are both bound once `r` is placed.
    for (const auto& l : pattern_.links) {
      auto index = [&](const std::string& n) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k <= i; ++k)
          if (objects_[k].decl->name == n) return k;
        return std::nullopt;
      };
      auto s = index(l.source);
      auto t = index(l.target);
      if (!s || !t || (*s != i && *t != i)) continue;
      ObjRef from = *s == i ? r : chosen[*s];
      ObjRef to = *t == i ? r : chosen[*t];
      auto role = find_role(model_, space_.at(from).class_name, l.role);
      if (!role) return "#" + std::to_string(from.id) + " has no role '" + l.role + "'";
      auto partners = space_.linked(*role, from);
      if (!std::binary_search(partners.begin(), partners.end(), to))
        return "link " + l.source + "." + l.role + " -> " + l.target + " missing (#" +
               std::to_string(from.id) + " to #" + std::to_string(to.id) + ")";
    }
    return {};
  }

  bool search(std::size_t i, std::vector<ObjRef>& chosen) {
    if (i == objects_.size()) return true;
    const CompiledObject& o = objects_[i];
    std::vector<ObjRef> candidates;
    if (o.seeded) candidates.push_back(*o.seeded);
    else
      for (std::uint32_t id = 0; id < space_.size(); ++id) candidates.push_back(ObjRef{id});
    bool any_class = false;
    std::string first_reason;
    for (ObjRef r : candidates) {
      std::string why = reject(i, r, chosen);
      if (is_subclass_of(model_, space_.at(r).class_name, o.decl->class_name)) any_class = true;
      if (!why.empty()) {
        if (first_reason.empty() && any_class) first_reason = why;
        continue;
      }
      chosen.push_back(r);
      if (search(i + 1, chosen)) return true;
      chosen.pop_back();
    }
    if (!any_class)
      note(i, "pattern object " + describe(o) + ": no object of class " + o.decl->class_name);
    else if (!first_reason.empty())
      note(i, "pattern object " + describe(o) + ": " + first_reason);
    return false;
  }

  const Model& model_;
  const ObjectSpace& space_;
  const ObjectPattern& pattern_;
  std::vector<CompiledObject> objects_;
  std::string why_;
  std::size_t why_depth_ = 0;
};

}  // namespace

PatternMatch match_pattern(const Model& model, const ObjectPattern& pattern,
                           const ObjectSpace& space, const Bindings& seed) {
  Env env;
  for (const auto& [name, r] : seed) env[name] = r;
  std::vector<CompiledObject> objects;
  for (const auto& po : pattern.objects) {
    CompiledObject c{&po, {}, std::nullopt};
    for (const auto& init : po.constraints)
      c.constraints.emplace_back(init.name, eval_ocl(init.value, model, space, env));
    if (auto it = seed.find(po.name); it != seed.end()) c.seeded = it->second;
    objects.push_back(std::move(c));
  }
  PatternMatch out;
  out.bindings = seed;
  PatternSearch search(model, space, pattern, std::move(objects));
  out.matched = search.run(out.bindings);
  if (!out.matched) {
    out.bindings = seed;
    out.explanation = search.explanation();
    if (out.explanation.empty()) out.explanation = "no consistent assignment of pattern objects";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool same_message(const ExpectedCall& e, const TraceEvent& ev) {
  if (e.sender != ev.caller || e.receiver != ev.callee || e.method != ev.method) return false;
  return !e.args || *e.args == ev.args;
}

std::string describe(const ExpectedCall& e) {
  TraceEvent ev{TraceEvent::Call, e.sender, e.receiver, e.method, e.args.value_or(std::vector<Value>{}), {}};
  return format_event(ev);
}

}  // namespace

TraceMatch match_trace(const std::vector<ExpectedCall>& expected, const Trace& trace,
                       DriverMode mode) {
  TraceMatch out;
  if (mode == DriverMode::Loose) {
    std::size_t next = 0;
    for (const auto& ev : trace) {
      if (next == expected.size()) break;
      if (ev.kind == TraceEvent::Call && same_message(expected[next], ev)) ++next;
    }
    if (next < expected.size()) {
      out.matched = false;
      out.position = next + 1;
      out.message = "expected message " + std::to_string(next + 1) + " (" +
                    describe(expected[next]) + ") not observed in order";
    }
    return out;
  }

  std::set<std::optional<ObjRef>> participants;
  for (const auto& e : expected) {
    participants.insert(e.sender);
    participants.insert(std::optional<ObjRef>(e.receiver));
  }
  std::vector<const TraceEvent*> filtered;
  for (const auto& ev : trace)
    if (ev.kind == TraceEvent::Call && participants.count(ev.caller) &&
        participants.count(std::optional<ObjRef>(ev.callee)))
      filtered.push_back(&ev);
  std::size_t n = std::max(filtered.size(), expected.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i < filtered.size() && i < expected.size() && same_message(expected[i], *filtered[i]))
      continue;
    out.matched = false;
    out.position = i + 1;
    if (i >= filtered.size())
      out.message = "message " + std::to_string(i + 1) + " (" + describe(expected[i]) +
                    ") never sent";
    else if (i >= expected.size())
      out.message = "unexpected message " + std::to_string(i + 1) + ": " + format_event(*filtered[i]);
    else
      out.message = "message " + std::to_string(i + 1) + ": expected " + describe(expected[i]) +
                    ", observed " + format_event(*filtered[i]);
    return out;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class TestRun {
 public:
  TestRun(const Model& model, const TestCase& test, const RunOptions& options)
      : model_(model), test_(test), options_(options) {
    result_.name = test.name;
    result_.category = test.category;
  }

  TestResult run() {
    try {
      phases();
    } catch (const EvalError& e) {
      error(current_, e);
    } catch (const ModelError& e) {
      add(current_, Status::Error, e.code() + ": " + e.what(), test_.loc);
    }
    if (options_.keep_space) result_.final_space = space_.serialize();
    for (const auto& d : result_.diagnostics)
      if (d.severity == Status::Error) result_.status = Status::Error;
      else if (result_.status == Status::Pass) result_.status = Status::Fail;
    return std::move(result_);
  }

 private:
  void add(Phase phase, Status sev, std::string msg, SourceLocation loc) {
    result_.diagnostics.push_back({phase, sev, std::move(msg), std::move(loc)});
  }

  void error(Phase phase, const EvalError& e) {
    add(phase, Status::Error, std::string(to_string(e.kind())) + ": " + e.what(), e.location());
  }

  void phases() {
    current_ = Phase::Setup;
    space_ = instantiate(model_, test_.setup);
    env_ = setup_bindings(test_.setup);

    current_ = Phase::Driver;
    Interpreter interp(model_, space_, options_.exec);
    std::vector<ExpectedCall> expected;
    for (const auto& item : test_.driver) {
      switch (item.kind) {
        case DriverKind::Trigger:
          current_ = Phase::Driver;
          interp.trigger(item.expr, env_);
          break;
        case DriverKind::Check:
          current_ = Phase::Checkpoint;
          if (!OclEvaluator(model_, space_).eval_bool(item.expr, env_))
            add(Phase::Checkpoint, Status::Fail, "checkpoint failed: " + print_expr(item.expr),
                item.loc);
          break;
        case DriverKind::Expect:
          current_ = Phase::Driver;
          expected.push_back(resolve_expect(item));
          break;
      }
    }
    current_ = Phase::Driver;
    TraceMatch tm = match_trace(expected, interp.trace(), test_.effective_mode());
    if (!tm.matched)
      add(Phase::Driver, Status::Fail,
          std::string(to_string(test_.effective_mode())) + " trace mismatch: " + tm.message,
          expect_loc(tm.position));

    current_ = Phase::Oracle;
    Env oracle_env = env_;
    bool pattern_ok = true;
    if (test_.pattern) {
      Bindings seed;
      for (const auto& [name, v] : env_) seed[name] = std::get<ObjRef>(v);
      PatternMatch pm = match_pattern(model_, *test_.pattern, space_, seed);
      if (!pm.matched) {
        pattern_ok = false;
        add(Phase::Oracle, Status::Fail, "pattern not matched: " + pm.explanation, test_.loc);
      }
      for (const auto& [name, r] : pm.bindings) oracle_env[name] = r;
    }
    if (pattern_ok) {
      for (const auto& a : test_.assertions)
        if (!OclEvaluator(model_, space_).eval_bool(a, oracle_env))
          add(Phase::Oracle, Status::Fail, "assertion failed: " + print_expr(a), a.loc);
    }

    current_ = Phase::Invariants;
    if (auto v = find_multiplicity_violation(model_, space_))
      throw EvalError(ErrorKind::MultiplicityViolation, *v, test_.loc);
    for (const auto& r : check_invariants(model_, space_)) {
      std::string who = "invariant " + r.invariant + " on " +
                        (space_.at(r.object).label.empty() ? "#" + std::to_string(r.object.id)
                                                           : space_.at(r.object).label);
      if (r.verdict == Verdict::Fail) add(Phase::Invariants, Status::Fail, who + " violated", test_.loc);
      if (r.verdict == Verdict::Error)
        add(Phase::Invariants, Status::Error, who + ": " + r.message, test_.loc);
    }
  }

  /// Location of the n-th expected message, or of the test.
  SourceLocation expect_loc(std::size_t n) const {
    for (const auto& item : test_.driver)
      if (item.kind == DriverKind::Expect && --n == 0) return item.loc;
    return test_.loc;
  }

  ExpectedCall resolve_expect(const DriverItem& item) {
    ExpectedCall e;
    auto obj = [&](const std::string& n) {
      auto it = env_.find(n);
      if (it == env_.end())
        throw EvalError(ErrorKind::UnboundVariable, "unknown object '" + n + "'", item.loc);
      return std::get<ObjRef>(it->second);
    };
    if (item.sender != kTester) e.sender = obj(item.sender);
    e.receiver = obj(item.receiver);
    e.method = item.method;
    if (!item.args.empty()) {
      std::vector<Value> args;
      for (const auto& a : item.args) args.push_back(eval_ocl(a, model_, space_, env_));
      e.args = std::move(args);
    }
    return e;
  }

  const Model& model_;
  const TestCase& test_;
  const RunOptions& options_;
  TestResult result_;
  ObjectSpace space_;
  Env env_;
  Phase current_ = Phase::Setup;
};

}  // namespace

TestResult run_test(const Model& model, const TestCase& test, const RunOptions& options) {
  return TestRun(model, test, options).run();
}

std::vector<TestResult> run_suite(const Model& model, const std::vector<TestCase>& tests,
                                  const RunOptions& options, unsigned jobs) {
  std::vector<TestResult> results(tests.size());
  if (jobs <= 1 || tests.size() <= 1) {
    for (std::size_t i = 0; i < tests.size(); ++i) results[i] = run_test(model, tests[i], options);
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tests.size(); i = next++)
      results[i] = run_test(model, tests[i], options);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, tests.size()); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace agm
