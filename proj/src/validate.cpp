#include "agm/validate.hpp"

#include <algorithm>
#include <set>

#include "agm/typecheck.hpp"

namespace agm {

std::string Finding::str() const {
  return location.str() + ": " + (severity == Severity::Error ? "error" : "warning") + ": " +
         rule + ": " + message;
}

bool WellFormednessReport::has(const std::string& rule) const {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.rule == rule; });
}

namespace {

class Validator {
 public:
  explicit Validator(const Model& m) : model_(m) {}

  WellFormednessReport run() {
    check_class_names();
    bool acyclic = check_inheritance();
    if (acyclic) {
      for (const auto& c : model_.classes) check_class(c);
      check_associations();
      check_role_namespace();
      for (const auto& c : model_.classes)
        if (c.statechart) check_statechart(c, *c.statechart);
      check_invariants();
      check_bodies();
    }
    return std::move(report_);
  }

 private:
  void add(const std::string& rule, const std::string& msg, const SourceLocation& loc) {
    report_.findings.push_back({Severity::Error, loc, rule, msg});
  }

  void add_issues(const std::vector<TypeIssue>& issues) {
    for (const auto& i : issues) add(i.code, i.message, i.loc);
  }

  void check_type(const TypeRef& t, const SourceLocation& loc) {
    if (!t.is_primitive() && !model_.find_class(t.name))
      add("unknown-type", "unknown type '" + t.name + "'", loc);
  }

  void check_class_names() {
    std::set<std::string> seen;
    for (const auto& c : model_.classes) {
      if (!seen.insert(c.name).second)
        add("duplicate-class", "class '" + c.name + "' declared more than once", c.loc);
      if (is_primitive_type_name(c.name))
        add("reserved-type-name", "'" + c.name + "' is a primitive type name", c.loc);
    }
  }

  bool check_inheritance() {
    bool acyclic = true;
    for (const auto& c : model_.classes) {
      if (!c.superclass) continue;
      if (!model_.find_class(*c.superclass)) {
        add("unknown-superclass", "class '" + c.name + "' extends unknown class '" +
                                      *c.superclass + "'",
            c.loc);
        continue;
      }
      std::set<std::string> seen{c.name};
      const ClassDef* cur = model_.find_class(*c.superclass);
      while (cur) {
        if (cur->name == c.name) {
          add("cycle-in-inheritance", "class '" + c.name + "' inherits from itself", c.loc);
          acyclic = false;
          break;
        }
        if (!seen.insert(cur->name).second) break;  // cycle above c, reported there
        cur = cur->superclass ? model_.find_class(*cur->superclass) : nullptr;
      }
    }
    return acyclic;
  }

  void check_class(const ClassDef& c) {
    std::set<std::string> attrs;
    auto chain = ancestry(model_, c.name);
    for (const auto& a : c.attributes) {
      if (!attrs.insert(a.name).second)
        add("duplicate-attribute", "attribute '" + a.name + "' declared twice in '" + c.name + "'",
            a.loc);
      for (std::size_t i = 1; i < chain.size(); ++i)
        if (chain[i]->find_attribute(a.name))
          add("shadowed-attribute",
              "attribute '" + a.name + "' of '" + c.name + "' shadows the one inherited from '" +
                  chain[i]->name + "'",
              a.loc);
      check_type(a.type, a.loc);
    }

    std::set<std::string> methods;
    for (const auto& m : c.methods) {
      if (!methods.insert(m.name).second)
        add("duplicate-method", "method '" + m.name + "' declared twice in '" + c.name + "'",
            m.loc);
      std::set<std::string> params;
      for (const auto& p : m.params) {
        if (!params.insert(p.name).second)
          add("duplicate-parameter", "parameter '" + p.name + "' repeated in '" + m.name + "'",
              m.loc);
        check_type(p.type, m.loc);
      }
      if (m.return_type) check_type(*m.return_type, m.loc);
      if (m.is_abstract && m.body)
        add("abstract-with-body", "abstract method '" + m.name + "' has a body", m.loc);
      if (!m.is_abstract && !m.body)
        add("missing-body", "method '" + m.name + "' needs a body or 'abstract'", m.loc);
      for (std::size_t i = 1; i < chain.size(); ++i) {
        if (const MethodDef* base = chain[i]->find_method(m.name)) {
          if (!base->same_signature(m))
            add("override-signature-mismatch",
                "method '" + m.name + "' of '" + c.name + "' does not match the signature in '" +
                    chain[i]->name + "'",
                m.loc);
          break;
        }
      }
    }
  }

  void check_associations() {
    std::set<std::string> names;
    for (const auto& a : model_.associations) {
      if (!names.insert(a.name).second)
        add("duplicate-association", "association '" + a.name + "' declared twice", a.loc);
      for (const AssocEnd* end : {&a.end_a, &a.end_b})
        if (!model_.find_class(end->class_name))
          add("unknown-class", "association '" + a.name + "' references unknown class '" +
                                   end->class_name + "'",
              a.loc);
      if (a.end_a.role == a.end_b.role)
        add("role-collision", "association '" + a.name + "' uses role '" + a.end_a.role + "' twice",
            a.loc);
    }
  }

  // Within one class, role names and attribute names share a namespace.
  void check_role_namespace() {
    std::set<std::string> reported;
    for (const auto& c : model_.classes) {
      std::set<std::string> attr_names;
      for (const auto& a : effective_attributes(model_, c.name)) attr_names.insert(a.name);
      std::set<std::string> roles;
      for (const RoleInfo& r : roles_of(model_, c.name)) {
        const std::string& role = r.far().role;
        if (!model_.find_class(r.far().class_name)) continue;
        std::string key = r.assoc->name + "." + role;
        if (attr_names.count(role) && reported.insert(key + "#attr").second)
          add("role-collision",
              "role '" + role + "' of association '" + r.assoc->name +
                  "' collides with an attribute of '" + c.name + "'",
              r.assoc->loc);
        if (!roles.insert(role).second && reported.insert(key + "#role").second)
          add("role-collision",
              "role '" + role + "' is reachable twice from '" + c.name + "'", r.assoc->loc);
      }
    }
  }

  void check_statechart(const ClassDef& c, const Statechart& sc) {
    std::set<std::string> states;
    for (const auto& s : sc.states)
      if (!states.insert(s).second)
        add("duplicate-state", "state '" + s + "' declared twice in '" + c.name + "'", sc.loc);
    if (!states.count(sc.initial))
      add("unknown-state", "initial state '" + sc.initial + "' is not declared", sc.loc);
    for (const auto& t : sc.transitions) {
      if (!states.count(t.source))
        add("unknown-state", "transition source '" + t.source + "' is not a state", t.loc);
      if (!states.count(t.target))
        add("unknown-state", "transition target '" + t.target + "' is not a state", t.loc);
      const MethodDef* m = find_method_on_chain(model_, c.name, t.trigger);
      if (!m) {
        add("unknown-trigger", "trigger '" + t.trigger + "' is not a method of '" + c.name + "'",
            t.loc);
        continue;
      }
      if (t.guard) {
        Scope scope;
        scope.self_class = c.name;
        for (const auto& p : m->params) scope.vars[p.name] = Type::of(p.type);
        std::vector<TypeIssue> issues;
        TypeChecker tc(model_, issues);
        tc.check_condition(*t.guard, scope, EvalContext::Query, "guard");
        add_issues(issues);
      }
    }
  }

  void check_invariants() {
    std::set<std::string> names;
    for (const auto& inv : model_.invariants) {
      if (!names.insert(inv.name).second)
        add("duplicate-invariant", "invariant '" + inv.name + "' declared twice", inv.loc);
      if (!model_.find_class(inv.context)) {
        add("unknown-class", "invariant context '" + inv.context + "' is not a class", inv.loc);
        continue;
      }
      Scope scope;
      scope.self_class = inv.context;
      std::vector<TypeIssue> issues;
      TypeChecker tc(model_, issues);
      tc.check_condition(inv.expr, scope, EvalContext::Query, "invariant");
      add_issues(issues);
    }
  }

  void check_bodies() {
    for (const auto& c : model_.classes) {
      for (const auto& m : c.methods) {
        std::vector<TypeIssue> issues;
        TypeChecker tc(model_, issues);
        tc.check_method(c, m);
        add_issues(issues);
      }
    }
  }

  const Model& model_;
  WellFormednessReport report_;
};

}  // namespace

WellFormednessReport validate_model(const Model& model) { return Validator(model).run(); }

}  // namespace agm
