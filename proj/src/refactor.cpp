#include "agm/refactor.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "agm/syntax.hpp"
#include "agm/typecheck.hpp"
#include "agm/validate.hpp"
#include "walk.hpp"

namespace agm {

std::string Violation::str() const {
  std::string out;
  if (location.line) out = location.str() + ": ";
  return out + condition + ": " + message;
}

bool ConditionReport::has(const std::string& condition) const {
  for (const auto& v : violations)
    if (v.condition == condition) return true;
  return false;
}

const char* to_string(Disposition d) {
  switch (d) {
    case Disposition::Unchanged: return "unchanged";
    case Disposition::Adapted: return "adapted";
    case Disposition::NeedsAttention: return "needs-attention";
  }
  return "?";
}

const TestDisposition* CoTransformReport::find(const std::string& test) const {
  for (const auto& t : tests)
    if (t.test == test) return &t;
  return nullptr;
}

namespace {

// ---------------------------------------------------------------------------
// Traversal helpers over mutable trees.

using ExprFn = std::function<void(Expr&)>;

void each_subexpr(Expr& e, const ExprFn& f) {
  f(e);
  for (auto& a : e.args) each_subexpr(a, f);
}

void each_stmt(Block& b, const std::function<void(Stmt&)>& f) {
  for (auto& s : b) {
    f(s);
    each_stmt(s.body, f);
    each_stmt(s.else_body, f);
  }
}

void each_stmt(const Block& b, const std::function<void(const Stmt&)>& f) {
  for (const auto& s : b) {
    f(s);
    each_stmt(s.body, f);
    each_stmt(s.else_body, f);
  }
}

void each_expr(Block& b, const ExprFn& f) {
  each_stmt(b, [&](Stmt& s) {
    each_subexpr(s.target, f);
    each_subexpr(s.value, f);
    for (auto& i : s.inits) each_subexpr(i.value, f);
  });
}

void each_expr(Model& m, const ExprFn& f) {
  for (auto& c : m.classes) {
    for (auto& meth : c.methods)
      if (meth.body) each_expr(*meth.body, f);
    if (c.statechart)
      for (auto& t : c.statechart->transitions)
        if (t.guard) each_subexpr(*t.guard, f);
  }
  for (auto& inv : m.invariants) each_subexpr(inv.expr, f);
}

void each_expr(TestCase& t, const ExprFn& f) {
  for (auto& o : t.setup.objects)
    for (auto& i : o.inits) each_subexpr(i.value, f);
  for (auto& d : t.driver) {
    each_subexpr(d.expr, f);
    for (auto& a : d.args) each_subexpr(a, f);
  }
  if (t.pattern)
    for (auto& po : t.pattern->objects)
      for (auto& c : po.constraints) each_subexpr(c.value, f);
  for (auto& a : t.assertions) each_subexpr(a, f);
}

ClassDef& class_ref(Model& m, const std::string& name) { return *m.find_class(name); }

bool in(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> ancestors_of(const Model& model, const std::string& cls) {
  std::vector<std::string> out;
  for (const ClassDef* c : ancestry(model, cls))
    if (c->name != cls) out.push_back(c->name);
  return out;
}

/// Integer literals in scripts may be negative; expressions spell them as a
/// negation.
Expr literal_expr(const Expr& lit) {
  if (lit.kind == ExprKind::IntLit && lit.int_value < 0)
    return Expr::unary(Op::Neg, Expr::int_lit(-lit.int_value));
  Expr e = lit;
  e.loc = {};
  return e;
}

bool literal_of_type(const Expr& lit, const TypeRef& type) {
  switch (lit.kind) {
    case ExprKind::IntLit: return type.name == "Int";
    case ExprKind::BoolLit: return type.name == "Bool";
    case ExprKind::StringLit: return type.name == "String";
    default: return false;
  }
}

void require(bool ok, const std::string& code, const std::string& message) {
  if (!ok) throw RefactorError(code, message);
}

const ClassDef& existing_class(const Model& model, const std::string& name) {
  const ClassDef* c = model.find_class(name);
  require(c != nullptr, "unknown-element", "unknown class '" + name + "'");
  return *c;
}

void require_direct_superclass(const ClassDef& sub, const std::string& target) {
  require(sub.superclass && *sub.superclass == target, "invalid-step",
          "'" + target + "' is not the direct superclass of '" + sub.name + "'");
}

/// Where `cls` is instantiated: setup objects and `new` statements.
std::vector<std::string> instantiation_sites(const Model& model, const TestSuite& suite,
                                             const std::string& cls) {
  std::vector<std::string> out;
  for (const auto& t : suite.tests)
    for (const auto& o : t.setup.objects)
      if (o.class_name == cls) out.push_back("setup object '" + o.name + "' of test " + t.name);
  for (const auto& c : model.classes)
    for (const auto& m : c.methods)
      if (m.body)
        each_stmt(*m.body, [&](const Stmt& s) {
          if (s.kind == StmtKind::Create && s.class_name == cls)
            out.push_back("'new " + cls + "' in " + c.name + "." + m.name);
        });
  return out;
}

// ---------------------------------------------------------------------------
// Context conditions

class Conditions {
 public:
  Conditions(const Model& model, const TestSuite& suite, ConditionReport& report)
      : model_(model), suite_(suite), report_(report) {}

  void operator()(const PullUpAttribute& r) {
    const ClassDef& sub = existing_class(model_, r.subclass);
    const ClassDef& target = existing_class(model_, r.target);
    require_direct_superclass(sub, r.target);
    const AttributeDef* a = sub.find_attribute(r.attribute);
    // Already pulled up: the name is inherited from the target, which C1 reports.
    std::optional<AttributeDef> inherited;
    if (!a)
      for (auto& ea : effective_attributes(model_, target.name))
        if (ea.name == r.attribute) inherited = ea;
    if (inherited) a = &*inherited;
    require(a != nullptr, "unknown-element",
            "class '" + sub.name + "' declares no attribute '" + r.attribute + "'");
    require(a->type.is_primitive(), "invalid-step",
            "attribute '" + r.attribute + "' has object type " + a->type.name +
                "; a pulled-up attribute needs a literal default");
    require(literal_of_type(r.default_value, a->type), "invalid-step",
            "default value " + print_expr(r.default_value) + " is not a " + a->type.name +
                " literal");

    for (const auto& ea : effective_attributes(model_, target.name))
      if (ea.name == r.attribute)
        add("C1", ea.loc, "'" + target.name + "' already has an attribute '" + r.attribute + "'");
    for (const auto& cls : subtree(model_, target.name)) {
      if (cls == sub.name) continue;
      const AttributeDef* other = model_.find_class(cls)->find_attribute(r.attribute);
      if (!other) continue;
      if (!r.merge)
        add("C1", other->loc,
            "'" + cls + "', another subclass of '" + target.name +
                "', already declares an attribute '" + r.attribute + "'");
      else if (!(other->type == a->type))
        add("C2", other->loc,
            "'" + cls + "." + r.attribute + "' has type " + other->type.name + ", but '" +
                sub.name + "." + r.attribute + "' has type " + a->type.name);
    }
    for (const auto& cls : subtree(model_, target.name))
      for (const auto& role : roles_of(model_, cls))
        if (role.far().role == r.attribute) {
          add("C1", role.assoc->loc,
              "'" + cls + "' already reaches a role named '" + r.attribute + "'");
          break;
        }
  }

  void operator()(const PullUpMethod& r) {
    const ClassDef& sub = existing_class(model_, r.subclass);
    const ClassDef& target = existing_class(model_, r.target);
    require_direct_superclass(sub, r.target);
    const MethodDef* m = sub.find_method(r.method);
    require(m != nullptr, "unknown-element",
            "class '" + sub.name + "' declares no method '" + r.method + "'");
    require(r.variant == PullUpVariant::AbstractSignature || !m->is_abstract, "invalid-step",
            "'" + sub.name + "." + r.method + "' is abstract; there is no body to move");

    // C3: the body must make sense with `self` typed as the target.
    if (r.variant == PullUpVariant::Override && m->body) {
      std::vector<TypeIssue> issues;
      TypeChecker tc(model_, issues);
      tc.check_method(target, *m);
      for (const auto& i : issues)
        add("C3", i.loc, "in the moved body of '" + r.method + "': " + i.message);
    }

    // C4: signature and dispatch conflicts.
    if (const MethodDef* own = target.find_method(r.method))
      add("C4", own->loc, "'" + target.name + "' already declares '" + r.method + "'");
    if (target.superclass) {
      if (const MethodDef* up = find_method_on_chain(model_, *target.superclass, r.method)) {
        const ClassDef* where = declaring_class(model_, *target.superclass, r.method);
        if (!up->same_signature(*m))
          add("C4", up->loc,
              "'" + where->name + "." + r.method + "' has a different signature");
        else
          add("C4", up->loc,
              "classes below '" + target.name + "' inherit '" + r.method + "' from '" +
                  where->name + "'; dispatch would change");
      }
    }
    for (const auto& cls : subtree(model_, target.name)) {
      if (cls == sub.name) continue;
      const MethodDef* other = model_.find_class(cls)->find_method(r.method);
      if (other && !other->same_signature(*m))
        add("C4", other->loc,
            "'" + cls + "." + r.method + "' would override with a different signature");
    }

    // C5: abstract signature needs implementations everywhere below.
    if (r.variant == PullUpVariant::AbstractSignature) {
      for (const auto& cls : subtree(model_, target.name)) {
        if (cls == target.name || is_abstract_class(model_, cls)) continue;
        const MethodDef* impl = find_method_on_chain(model_, cls, r.method);
        if (!impl || impl->is_abstract)
          add("C5", model_.find_class(cls)->loc,
              "concrete class '" + cls + "' does not implement '" + r.method + "'");
      }
      if (!is_abstract_class(model_, target.name))
        for (const auto& site : instantiation_sites(model_, suite_, target.name))
          add("C5", target.loc,
              "'" + target.name + "' would become abstract but is instantiated: " + site);
    }
  }

  void operator()(const RenameAttribute& r) {
    const ClassDef& c = existing_class(model_, r.class_name);
    require(c.find_attribute(r.old_name) != nullptr, "unknown-element",
            "class '" + c.name + "' declares no attribute '" + r.old_name + "'");
    if (r.old_name == r.new_name) add("C6", c.loc, "new name equals the old name");
    for (const auto& cls : scope_classes(c.name)) {
      const ClassDef* x = model_.find_class(cls);
      if (const AttributeDef* a = x->find_attribute(r.new_name))
        add("C6", a->loc, "'" + cls + "' already declares an attribute '" + r.new_name + "'");
    }
    for (const auto& cls : subtree(model_, c.name))
      for (const auto& role : roles_of(model_, cls))
        if (role.far().role == r.new_name) {
          add("C6", role.assoc->loc, "'" + cls + "' already reaches a role '" + r.new_name + "'");
          break;
        }
  }

  void operator()(const RenameMethod& r) {
    const ClassDef& c = existing_class(model_, r.class_name);
    require(c.find_method(r.old_name) != nullptr, "unknown-element",
            "class '" + c.name + "' declares no method '" + r.old_name + "'");
    if (r.old_name == r.new_name) add("C6", c.loc, "new name equals the old name");
    for (const auto& up : ancestors_of(model_, c.name))
      if (const MethodDef* m = model_.find_class(up)->find_method(r.old_name))
        add("C6", m->loc,
            "'" + r.old_name + "' overrides '" + up + "." + r.old_name + "'; rename it there");
    for (const auto& cls : scope_classes(c.name))
      if (const MethodDef* m = model_.find_class(cls)->find_method(r.new_name))
        add("C6", m->loc, "'" + cls + "' already declares a method '" + r.new_name + "'");
  }

  void operator()(const RenameClass& r) {
    const ClassDef& c = existing_class(model_, r.old_name);
    if (r.old_name == r.new_name) add("C6", c.loc, "new name equals the old name");
    if (const ClassDef* other = model_.find_class(r.new_name); other && other != &c)
      add("C6", other->loc, "a class '" + r.new_name + "' already exists");
    if (is_primitive_type_name(r.new_name))
      add("C6", c.loc, "'" + r.new_name + "' is a primitive type name");
  }

 private:
  void add(const char* cond, const SourceLocation& loc, std::string msg) {
    report_.violations.push_back({cond, loc, std::move(msg)});
  }

  /// Ancestors, the class itself, and its subclasses.
  std::vector<std::string> scope_classes(const std::string& cls) const {
    std::vector<std::string> out = ancestors_of(model_, cls);
    for (auto& s : subtree(model_, cls)) out.push_back(s);
    return out;
  }

  const Model& model_;
  const TestSuite& suite_;
  ConditionReport& report_;
};

// ---------------------------------------------------------------------------
// Transformations

class Transformer {
 public:
  Transformer(const Model& model, const TestSuite& suite) : old_model_(model) {
    out_.model = model;
    out_.suite = suite;
    for (const auto& t : suite.tests) out_.report.tests.push_back({t.name, Disposition::Unchanged, {}, {}});
  }

  Applied take() { return std::move(out_); }

  void operator()(const PullUpAttribute& r) {
    Model& m = out_.model;
    std::vector<std::string> declarers{r.subclass};
    if (r.merge)
      for (const auto& cls : subtree(old_model_, r.target))
        if (cls != r.subclass && old_model_.find_class(cls)->find_attribute(r.attribute))
          declarers.push_back(cls);
    std::vector<std::string> had;
    for (const auto& d : declarers)
      for (auto& s : subtree(old_model_, d)) had.push_back(s);
    std::vector<std::string> gaining;
    for (auto& s : subtree(old_model_, r.target))
      if (!in(had, s)) gaining.push_back(s);

    AttributeDef moved = *old_model_.find_class(r.subclass)->find_attribute(r.attribute);
    for (const auto& d : declarers) {
      auto& attrs = class_ref(m, d).attributes;
      attrs.erase(std::remove_if(attrs.begin(), attrs.end(),
                                 [&](const AttributeDef& a) { return a.name == r.attribute; }),
                  attrs.end());
    }
    class_ref(m, r.target).attributes.push_back(moved);

    const Expr value = literal_expr(r.default_value);
    const std::string shown = print_expr(value);
    for (auto& c : m.classes)
      for (auto& meth : c.methods)
        if (meth.body)
          each_stmt(*meth.body, [&](Stmt& s) {
            if (s.kind == StmtKind::Create && in(gaining, s.class_name) && !sets(s.inits, r.attribute))
              s.inits.push_back({r.attribute, value});
          });

    for (std::size_t i = 0; i < out_.suite.tests.size(); ++i) {
      TestCase& t = out_.suite.tests[i];
      for (auto& o : t.setup.objects)
        if (in(gaining, o.class_name) && !sets(o.inits, r.attribute)) {
          o.inits.push_back({r.attribute, value});
          adapted(i, "setup object '" + o.name + "' (" + o.class_name + ") gets " + r.attribute +
                         " = " + shown);
        }
      if (t.pattern)
        for (const auto& po : t.pattern->objects)
          if ((in(gaining, po.class_name) || po.class_name == r.target) &&
              sets(po.constraints, r.attribute))
            attention(i, "pattern object '" + po.name + "' (" + po.class_name +
                             ") constrains the moved attribute '" + r.attribute + "'");
    }
  }

  void operator()(const PullUpMethod& r) {
    Model& m = out_.model;
    MethodDef moved = *old_model_.find_class(r.subclass)->find_method(r.method);
    if (r.variant == PullUpVariant::Override) {
      auto& methods = class_ref(m, r.subclass).methods;
      methods.erase(std::remove_if(methods.begin(), methods.end(),
                                   [&](const MethodDef& x) { return x.name == r.method; }),
                    methods.end());
      class_ref(m, r.target).methods.push_back(std::move(moved));
    } else {
      moved.is_abstract = true;
      moved.body.reset();
      class_ref(m, r.target).methods.push_back(std::move(moved));
    }
  }

  void operator()(const RenameAttribute& r) {
    auto scope = subtree(old_model_, r.class_name);
    rename_members(MemberKind::Attribute, scope, r.old_name, r.new_name);
    for (auto& a : class_ref(out_.model, r.class_name).attributes)
      if (a.name == r.old_name) a.name = r.new_name;
    auto rename_inits = [&](std::vector<Initializer>& inits) {
      std::size_t n = 0;
      for (auto& i : inits)
        if (i.name == r.old_name) {
          i.name = r.new_name;
          ++n;
        }
      return n;
    };
    for (auto& c : out_.model.classes)
      for (auto& meth : c.methods)
        if (meth.body)
          each_stmt(*meth.body, [&](Stmt& s) {
            if (s.kind == StmtKind::Create && in(scope, s.class_name)) rename_inits(s.inits);
          });
    for (std::size_t i = 0; i < out_.suite.tests.size(); ++i) {
      TestCase& t = out_.suite.tests[i];
      std::size_t n = 0;
      for (auto& o : t.setup.objects)
        if (in(scope, o.class_name)) n += rename_inits(o.inits);
      if (t.pattern)
        for (auto& po : t.pattern->objects)
          if (in(scope, po.class_name)) n += rename_inits(po.constraints);
      if (n) adapted(i, std::to_string(n) + " initializer(s) of '" + r.old_name + "' renamed");
    }
  }

  void operator()(const RenameMethod& r) {
    auto scope = subtree(old_model_, r.class_name);
    rename_members(MemberKind::Method, scope, r.old_name, r.new_name);
    for (const auto& cls : scope) {
      ClassDef& c = class_ref(out_.model, cls);
      for (auto& meth : c.methods)
        if (meth.name == r.old_name) meth.name = r.new_name;
      if (c.statechart)
        for (auto& t : c.statechart->transitions)
          if (t.trigger == r.old_name) t.trigger = r.new_name;
    }
    for (std::size_t i = 0; i < out_.suite.tests.size(); ++i) {
      TestCase& t = out_.suite.tests[i];
      std::size_t n = 0;
      for (auto& d : t.driver) {
        if (d.kind != DriverKind::Expect || d.method != r.old_name) continue;
        const SetupObject* recv = t.setup.find(d.receiver);
        if (recv && in(scope, recv->class_name)) {
          d.method = r.new_name;
          ++n;
        }
      }
      if (n) adapted(i, std::to_string(n) + " expected message(s) '" + r.old_name + "' renamed");
    }
  }

  void operator()(const RenameClass& r) {
    Model& m = out_.model;
    auto fix = [&](std::string& name) {
      if (name != r.old_name) return std::size_t{0};
      name = r.new_name;
      return std::size_t{1};
    };
    auto fix_expr = [&](Expr& e) {
      if (e.kind == ExprKind::AllInstances) return fix(e.name);
      return std::size_t{0};
    };
    for (auto& c : m.classes) {
      fix(c.name);
      if (c.superclass) fix(*c.superclass);
      for (auto& a : c.attributes) fix(a.type.name);
      for (auto& meth : c.methods) {
        for (auto& p : meth.params) fix(p.type.name);
        if (meth.return_type) fix(meth.return_type->name);
        if (meth.body)
          each_stmt(*meth.body, [&](Stmt& s) {
            if (s.kind == StmtKind::Create) fix(s.class_name);
          });
      }
    }
    for (auto& a : m.associations) {
      fix(a.end_a.class_name);
      fix(a.end_b.class_name);
    }
    for (auto& inv : m.invariants) fix(inv.context);
    each_expr(m, [&](Expr& e) { fix_expr(e); });

    for (std::size_t i = 0; i < out_.suite.tests.size(); ++i) {
      TestCase& t = out_.suite.tests[i];
      std::size_t n = 0;
      for (auto& o : t.setup.objects) n += fix(o.class_name);
      if (t.pattern)
        for (auto& po : t.pattern->objects) n += fix(po.class_name);
      each_expr(t, [&](Expr& e) { n += fix_expr(e); });
      if (n) adapted(i, std::to_string(n) + " reference(s) to class '" + r.old_name + "' renamed");
    }
  }

 private:
  static bool sets(const std::vector<Initializer>& inits, const std::string& name) {
    return std::any_of(inits.begin(), inits.end(),
                       [&](const Initializer& i) { return i.name == name; });
  }

  void adapted(std::size_t i, std::string edit) {
    TestDisposition& d = out_.report.tests[i];
    if (d.disposition == Disposition::Unchanged) d.disposition = Disposition::Adapted;
    d.edits.push_back(std::move(edit));
  }

  void attention(std::size_t i, std::string reason) {
    TestDisposition& d = out_.report.tests[i];
    d.disposition = Disposition::NeedsAttention;
    if (!d.reason.empty()) d.reason += "; ";
    d.reason += reason;
  }

  /// Renames member references whose receiver's static class lies in `scope`.
  /// References are found by typing the copy before anything is renamed.
  void rename_members(MemberKind kind, const std::vector<std::string>& scope,
                      const std::string& from, const std::string& to) {
    std::vector<const Expr*> hits;
    auto hook = [&](const Expr& node, const std::string& cls, MemberKind k) {
      if (k == kind && node.name == from && in(scope, cls)) hits.push_back(&node);
    };
    detail::walk_model(out_.model, hook);
    std::vector<std::size_t> per_test(out_.suite.tests.size(), 0);
    for (std::size_t i = 0; i < out_.suite.tests.size(); ++i) {
      std::size_t before = hits.size();
      detail::walk_test(out_.model, out_.suite.tests[i], hook);
      per_test[i] = hits.size() - before;
    }
    // The nodes belong to our own copies, so writing through them is fine.
    for (const Expr* e : hits) const_cast<Expr*>(e)->name = to;
    for (std::size_t i = 0; i < per_test.size(); ++i)
      if (per_test[i])
        adapted(i, std::to_string(per_test[i]) + " reference(s) to '" + from + "' renamed");
  }

  const Model& old_model_;
  Applied out_;
};

}  // namespace

ConditionReport check_conditions(const Model& model, const TestSuite& suite,
                                 const Refactoring& step) {
  ConditionReport report{step, {}};
  Conditions c(model, suite, report);
  std::visit(c, step);
  return report;
}

Applied apply(const Model& model, const TestSuite& suite, const Refactoring& step) {
  ConditionReport report = check_conditions(model, suite, step);
  if (!report.applicable()) {
    std::string msg = std::string(kind_name(step)) + " is blocked";
    for (const auto& v : report.violations) msg += "; " + v.condition + ": " + v.message;
    throw RefactorError("blocked-refactoring", msg);
  }
  const bool valid_before =
      validate_model(model).clean() && resolve_tests(suite, model).empty();
  Transformer t(model, suite);
  std::visit(t, step);
  Applied out = t.take();
  if (valid_before) {
    auto findings = validate_model(out.model).findings;
    auto diags = resolve_tests(out.suite, out.model);
    if (!findings.empty() || !diags.empty()) {
      std::string msg = std::string(kind_name(step)) + " would produce an invalid result";
      if (!findings.empty()) msg += ": " + findings.front().str();
      else msg += ": " + diags.front().str();
      throw RefactorError("blocked-refactoring", msg);
    }
  }
  return out;
}

ScriptResult apply_script(const Model& model, const TestSuite& suite,
                          const std::vector<Refactoring>& steps) {
  ScriptResult out;
  Model cur_model = model;
  TestSuite cur_suite = suite;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto block = [&](std::string why) {
      out.blocked_at = i + 1;
      out.blocked_reason = std::move(why);
    };
    try {
      ConditionReport report = check_conditions(cur_model, cur_suite, steps[i]);
      out.conditions.push_back(report);
      if (!report.applicable()) {
        std::string why;
        for (const auto& v : report.violations) why += (why.empty() ? "" : "; ") + v.str();
        block(why);
        break;
      }
      Applied a = apply(cur_model, cur_suite, steps[i]);
      cur_model = std::move(a.model);
      cur_suite = std::move(a.suite);
      out.reports.push_back(std::move(a.report));
    } catch (const RefactorError& e) {
      block(e.code() + ": " + e.what());
      break;
    }
  }

  for (const auto& t : suite.tests) out.combined.tests.push_back({t.name, Disposition::Unchanged, {}, {}});
  if (out.blocked_at) {
    out.model = model;
    out.suite = suite;
    return out;
  }
  out.model = std::move(cur_model);
  out.suite = std::move(cur_suite);
  for (const auto& r : out.reports)
    for (std::size_t i = 0; i < r.tests.size() && i < out.combined.tests.size(); ++i) {
      TestDisposition& c = out.combined.tests[i];
      const TestDisposition& d = r.tests[i];
      if (d.disposition == Disposition::NeedsAttention) {
        c.disposition = Disposition::NeedsAttention;
        c.reason += (c.reason.empty() ? "" : "; ") + d.reason;
      } else if (d.disposition == Disposition::Adapted && c.disposition == Disposition::Unchanged) {
        c.disposition = Disposition::Adapted;
      }
      c.edits.insert(c.edits.end(), d.edits.begin(), d.edits.end());
    }
  return out;
}

}  // namespace agm
