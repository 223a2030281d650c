#include <set>

#include "agm/syntax.hpp"
#include "agm/typecheck.hpp"

namespace agm {

namespace {

class TestResolver {
 public:
  TestResolver(const Model& model, Diagnostics& out) : model_(model), out_(out) {}

  void resolve(const TestCase& t) {
    Scope setup_scope;
    std::set<std::string> names;
    for (const auto& o : t.setup.objects) {
      if (!names.insert(o.name).second) add(o.loc, "duplicate-object", "object '" + o.name + "' declared twice");
      if (!model_.find_class(o.class_name)) {
        add(o.loc, "unknown-class", "unknown class '" + o.class_name + "'");
        setup_scope.vars[o.name] = Type{};
      } else {
        setup_scope.vars[o.name] = Type::object(o.class_name);
      }
    }

    for (const auto& o : t.setup.objects) {
      if (!model_.find_class(o.class_name)) continue;
      check_inits(o.class_name, o.inits, o.loc, setup_scope);
    }

    for (const auto& l : t.setup.links) check_link(l.source, l.role, l.target, l.loc, setup_scope);

    for (const auto& d : t.driver) {
      switch (d.kind) {
        case DriverKind::Trigger:
          check_types([&](TypeChecker& tc) { tc.check_expr(d.expr, setup_scope, EvalContext::Action); });
          break;
        case DriverKind::Check:
          check_types([&](TypeChecker& tc) {
            tc.check_condition(d.expr, setup_scope, EvalContext::Query, "checkpoint");
          });
          break;
        case DriverKind::Expect:
          check_expect(d, setup_scope);
          break;
      }
    }

    Scope oracle_scope = setup_scope;
    if (t.pattern) {
      std::set<std::string> bindings;
      for (const auto& po : t.pattern->objects) {
        if (!bindings.insert(po.name).second)
          add(po.loc, "duplicate-binding", "pattern object '" + po.name + "' bound twice");
        if (!model_.find_class(po.class_name)) {
          add(po.loc, "unknown-class", "unknown class '" + po.class_name + "'");
          oracle_scope.vars[po.name] = Type{};
          continue;
        }
        oracle_scope.vars[po.name] = Type::object(po.class_name);
      }
      for (const auto& po : t.pattern->objects) {
        if (!model_.find_class(po.class_name)) continue;
        check_inits(po.class_name, po.constraints, po.loc, setup_scope);
      }
      for (const auto& l : t.pattern->links) check_link(l.source, l.role, l.target, l.loc, oracle_scope);
    }
    for (const auto& a : t.assertions)
      check_types([&](TypeChecker& tc) {
        tc.check_condition(a, oracle_scope, EvalContext::Query, "assertion");
      });
  }

 private:
  void add(const SourceLocation& loc, const std::string& code, const std::string& msg) {
    out_.push_back({loc, code, msg, {}});
  }

  template <class F>
  void check_types(F&& f) {
    std::vector<TypeIssue> issues;
    TypeChecker tc(model_, issues);
    f(tc);
    for (auto& i : issues) add(i.loc, map_code(i.code), i.message);
  }

  static std::string map_code(const std::string& code) {
    if (code == "unknown-variable") return "unknown-object";
    if (code == "unknown-member") return "unknown-attribute";
    return code;
  }

  void check_inits(const std::string& cls, const std::vector<Initializer>& inits,
                   const SourceLocation& loc, const Scope& scope) {
    auto attrs = effective_attributes(model_, cls);
    std::set<std::string> seen;
    for (const auto& init : inits) {
      if (!seen.insert(init.name).second)
        add(loc, "duplicate-initializer", "attribute '" + init.name + "' given twice");
      const AttributeDef* found = nullptr;
      for (const auto& a : attrs)
        if (a.name == init.name) found = &a;
      if (!found) {
        add(init.value.loc, "unknown-attribute",
            "class '" + cls + "' has no attribute '" + init.name + "'");
        continue;
      }
      check_types([&](TypeChecker& tc) {
        Type t = tc.check_expr(init.value, scope, EvalContext::Query);
        if (!tc.assignable(t, Type::of(found->type)))
          add(init.value.loc, "type-error",
              "value for '" + init.name + "' must be " + found->type.name + ", found " + t.str());
      });
    }
  }

  void check_link(const std::string& source, const std::string& role, const std::string& target,
                  const SourceLocation& loc, const Scope& scope) {
    auto src = scope.vars.find(source);
    auto dst = scope.vars.find(target);
    if (src == scope.vars.end()) add(loc, "unknown-object", "unknown object '" + source + "'");
    if (dst == scope.vars.end()) add(loc, "unknown-object", "unknown object '" + target + "'");
    if (src == scope.vars.end() || src->second.kind != Type::Object) return;
    auto r = find_role(model_, src->second.cls, role);
    if (!r) {
      add(loc, "unknown-role", "class '" + src->second.cls + "' has no role '" + role + "'");
      return;
    }
    if (dst != scope.vars.end() && dst->second.kind == Type::Object &&
        !is_subclass_of(model_, dst->second.cls, r->far().class_name))
      add(loc, "type-error",
          "role '" + role + "' links " + r->far().class_name + ", found " + dst->second.cls);
  }

  void check_expect(const DriverItem& d, const Scope& scope) {
    if (d.sender != kTester && !scope.vars.count(d.sender))
      add(d.loc, "unknown-object", "unknown sender '" + d.sender + "'");
    auto recv = scope.vars.find(d.receiver);
    if (recv == scope.vars.end()) {
      add(d.loc, "unknown-object", "unknown receiver '" + d.receiver + "'");
      return;
    }
    if (recv->second.kind != Type::Object) return;
    const MethodDef* m = find_method_on_chain(model_, recv->second.cls, d.method);
    if (!m) {
      add(d.loc, "unknown-method",
          "class '" + recv->second.cls + "' has no method '" + d.method + "'");
      return;
    }
    if (d.args.empty()) return;
    if (d.args.size() != m->params.size()) {
      add(d.loc, "arity-mismatch", "expected message '" + d.method + "' takes " +
                                       std::to_string(m->params.size()) + " argument(s)");
      return;
    }
    for (std::size_t i = 0; i < d.args.size(); ++i) {
      check_types([&](TypeChecker& tc) {
        Type t = tc.check_expr(d.args[i], scope, EvalContext::Query);
        if (!tc.assignable(t, Type::of(m->params[i].type)))
          add(d.args[i].loc, "type-error",
              "argument " + std::to_string(i + 1) + " must be " + m->params[i].type.name);
      });
    }
  }

  const Model& model_;
  Diagnostics& out_;
};

}  // namespace

Diagnostics resolve_tests(const TestSuite& suite, const Model& model) {
  Diagnostics out;
  std::set<std::string> names;
  TestResolver r(model, out);
  for (const auto& t : suite.tests) {
    if (!names.insert(t.name).second)
      out.push_back({t.loc, "duplicate-test", "test '" + t.name + "' declared twice", {}});
    r.resolve(t);
  }
  return out;
}

}  // namespace agm
