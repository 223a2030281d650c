#include "walk.hpp"

namespace agm::detail {

namespace {

Type object_or_error(const Model& model, const std::string& cls) {
  return model.find_class(cls) ? Type::object(cls) : Type{};
}

}  // namespace

Scope test_setup_scope(const Model& model, const TestCase& test) {
  Scope scope;
  for (const auto& o : test.setup.objects) scope.vars[o.name] = object_or_error(model, o.class_name);
  return scope;
}

Scope test_oracle_scope(const Model& model, const TestCase& test) {
  Scope scope = test_setup_scope(model, test);
  if (test.pattern)
    for (const auto& po : test.pattern->objects)
      scope.vars[po.name] = object_or_error(model, po.class_name);
  return scope;
}

void walk_model(const Model& model, const MemberHook& hook) {
  std::vector<TypeIssue> ignored;
  TypeChecker tc(model, ignored);
  tc.set_member_hook(hook);
  for (const auto& c : model.classes) {
    for (const auto& m : c.methods) tc.check_method(c, m);
    if (!c.statechart) continue;
    for (const auto& t : c.statechart->transitions) {
      if (!t.guard) continue;
      Scope scope;
      scope.self_class = c.name;
      if (const MethodDef* m = find_method_on_chain(model, c.name, t.trigger))
        for (const auto& p : m->params) scope.vars[p.name] = Type::of(p.type);
      tc.check_expr(*t.guard, scope, EvalContext::Query);
    }
  }
  for (const auto& inv : model.invariants) {
    Scope scope;
    scope.self_class = inv.context;
    tc.check_expr(inv.expr, scope, EvalContext::Query);
  }
}

void walk_test(const Model& model, const TestCase& test, const MemberHook& hook) {
  std::vector<TypeIssue> ignored;
  TypeChecker tc(model, ignored);
  tc.set_member_hook(hook);
  Scope setup = test_setup_scope(model, test);
  for (const auto& o : test.setup.objects)
    for (const auto& init : o.inits) tc.check_expr(init.value, setup, EvalContext::Query);
  for (const auto& d : test.driver) {
    switch (d.kind) {
      case DriverKind::Trigger: tc.check_expr(d.expr, setup, EvalContext::Action); break;
      case DriverKind::Check: tc.check_expr(d.expr, setup, EvalContext::Query); break;
      case DriverKind::Expect:
        for (const auto& a : d.args) tc.check_expr(a, setup, EvalContext::Query);
        break;
    }
  }
  if (test.pattern)
    for (const auto& po : test.pattern->objects)
      for (const auto& c : po.constraints) tc.check_expr(c.value, setup, EvalContext::Query);
  Scope oracle = test_oracle_scope(model, test);
  for (const auto& a : test.assertions) tc.check_expr(a, oracle, EvalContext::Query);
}

}  // namespace agm::detail
