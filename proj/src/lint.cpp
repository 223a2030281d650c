#include "agm/lint.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "agm/syntax.hpp"
#include "agm/typecheck.hpp"

namespace agm {

std::string LintFinding::str() const {
  std::string out = location.str() + ": " + rule + " " + name;
  if (advisory) out += " (advisory)";
  return out + ": " + message;
}

namespace {

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

Scope setup_scope(const Model& model, const TestCase& t) {
  Scope scope;
  for (const auto& o : t.setup.objects)
    scope.vars[o.name] = model.find_class(o.class_name) ? Type::object(o.class_name) : Type{};
  return scope;
}

Scope oracle_scope(const Model& model, const TestCase& t) {
  Scope scope = setup_scope(model, t);
  if (t.pattern)
    for (const auto& po : t.pattern->objects)
      scope.vars[po.name] = model.find_class(po.class_name) ? Type::object(po.class_name) : Type{};
  return scope;
}

struct AttrRead {
  const Expr* node;
  std::string cls;
  TypeRef type;
};

/// Attribute navigations inside `e`, with the static class of their receiver.
std::vector<AttrRead> attribute_reads(const Model& model, const Expr& e, const Scope& scope) {
  std::vector<AttrRead> out;
  std::vector<TypeIssue> issues;
  TypeChecker tc(model, issues);
  tc.set_member_hook([&](const Expr& node, const std::string& cls, MemberKind kind) {
    if (kind != MemberKind::Attribute || !model.find_class(cls)) return;
    for (const auto& a : effective_attributes(model, cls))
      if (a.name == node.name) out.push_back({&node, cls, a.type});
  });
  tc.check_expr(e, scope, EvalContext::Query);
  return out;
}

void collect_point_equalities(const Expr& e, const std::vector<AttrRead>& reads,
                              std::vector<const Expr*>& out) {
  auto int_read = [&](const Expr& operand) {
    for (const auto& r : reads)
      if (r.node == &operand && r.type.name == "Int") return true;
    return false;
  };
  if (e.kind == ExprKind::Binary && e.op == Op::Eq && (int_read(e.args[0]) || int_read(e.args[1])))
    out.push_back(&e);
  for (const auto& a : e.args) collect_point_equalities(a, reads, out);
}

const MethodDef* published_query(const Model& model, const std::string& cls,
                                 const std::string& attr) {
  std::vector<TypeIssue> ignored;
  TypeChecker tc(model, ignored);
  for (const std::string prefix : {"get", "is"}) {
    const MethodDef* m = find_method_on_chain(model, cls, prefix + capitalized(attr));
    if (m && m->published && m->return_type && tc.is_query_call(cls, m->name)) return m;
  }
  return nullptr;
}

class Linter {
 public:
  Linter(const Model& model, const TestCase& t, const LintOptions& o)
      : model_(model), test_(t), options_(o) {}

  std::vector<LintFinding> run() {
    over_specification();
    total_oracle();
    point_equality_and_direct_reads();
    internal_interaction();
    unpublished_target();
    return std::move(out_);
  }

 private:
  void add(const char* rule, const char* name, std::string msg, const SourceLocation& loc,
           bool advisory = false) {
    out_.push_back({rule, name, test_.name, std::move(msg), loc, advisory});
  }

  void over_specification() {
    if (!test_.pattern) return;
    for (const auto& po : test_.pattern->objects) {
      if (!model_.find_class(po.class_name)) continue;
      std::size_t total = effective_attributes(model_, po.class_name).size();
      if (total == 0) continue;
      double share = static_cast<double>(po.constraints.size()) / static_cast<double>(total);
      if (share > options_.l1_threshold) {
        std::ostringstream msg;
        msg << "pattern object '" << po.name << "' constrains " << po.constraints.size() << " of "
            << total << " attributes of " << po.class_name;
        add("L1", "over-specification", msg.str(), po.loc);
      }
    }
  }

  void total_oracle() {
    if (!test_.pattern) return;
    std::size_t p = test_.pattern->objects.size();
    std::size_t s = test_.setup.objects.size();
    if (p > s)
      add("L2", "total-oracle",
          "pattern has " + std::to_string(p) + " objects but setup only " + std::to_string(s),
          test_.pattern->objects.front().loc);
  }

  void point_equality_and_direct_reads() {
    Scope scope = oracle_scope(model_, test_);
    for (const auto& a : test_.assertions) {
      auto reads = attribute_reads(model_, a, scope);
      std::vector<const Expr*> eqs;
      collect_point_equalities(a, reads, eqs);
      for (const Expr* e : eqs)
        add("L3", "point-equality",
            "'" + print_expr(*e) + "' pins an Int attribute; a range may be more robust", e->loc,
            true);
      for (const auto& r : reads)
        if (const MethodDef* q = published_query(model_, r.cls, r.node->name))
          add("L4", "direct-attribute-read",
              "reads " + r.cls + "." + r.node->name + " directly; use query " + q->name + "()",
              r.node->loc.line ? r.node->loc : a.loc);
    }
  }

  std::string class_of(const std::string& object) const {
    if (const SetupObject* o = test_.setup.find(object)) return o->class_name;
    return {};
  }

  bool is_published_class(const std::string& cls) const {
    const ClassDef* c = model_.find_class(cls);
    return c && c->published;
  }

  void internal_interaction() {
    for (const auto& d : test_.driver) {
      if (d.kind != DriverKind::Expect || d.sender == kTester) continue;
      std::string from = class_of(d.sender);
      std::string to = class_of(d.receiver);
      if (!is_published_class(from) && !is_published_class(to))
        add("L5", "internal-interaction",
            "expected message " + d.sender + " -> " + d.receiver + " : " + d.method +
                " stays inside unpublished classes",
            d.loc);
    }
  }

  void unpublished_target() {
    Scope scope = setup_scope(model_, test_);
    for (const auto& d : test_.driver) {
      if (d.kind != DriverKind::Trigger || d.expr.args.empty()) continue;
      std::vector<TypeIssue> ignored;
      TypeChecker tc(model_, ignored);
      Type recv = tc.check_expr(d.expr.args[0], scope, EvalContext::Query);
      if (recv.kind != Type::Object || !model_.find_class(recv.cls)) continue;
      const MethodDef* m = find_method_on_chain(model_, recv.cls, d.expr.name);
      if (!is_published_class(recv.cls))
        add("L6", "unpublished-target", "trigger targets unpublished class " + recv.cls, d.loc);
      else if (!m || !m->published)
        add("L6", "unpublished-target",
            "trigger targets unpublished method " + recv.cls + "." + d.expr.name, d.loc);
    }
  }

  const Model& model_;
  const TestCase& test_;
  const LintOptions& options_;
  std::vector<LintFinding> out_;
};

}  // namespace

std::vector<LintFinding> lint_acceptance(const Model& model, const TestCase& test,
                                         const LintOptions& options) {
  if (test.category != Category::Acceptance) return {};
  return Linter(model, test, options).run();
}

bool published_only(const Model& model, const TestCase& test) {
  TestCase probe = test;
  probe.category = Category::Acceptance;
  for (const auto& f : lint_acceptance(model, probe))
    if (f.rule == "L6") return false;
  return true;
}

}  // namespace agm
