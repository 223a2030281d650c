#include "agm/model.hpp"

#include <algorithm>
#include <set>

namespace agm {

std::string SourceLocation::str() const {
  return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
         std::to_string(column);
}

std::string ParseDiagnostic::str() const {
  std::string out = location.str() + ": ";
  if (!code.empty() && code != "syntax") out += code + ": ";
  out += message;
  if (!expected.empty()) out += " (expected " + expected + ")";
  return out;
}

bool is_primitive_type_name(const std::string& name) {
  return name == "Int" || name == "Bool" || name == "String";
}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "implies";
    case Op::Not: return "not";
    case Op::Neg: return "-";
    case Op::None: break;
  }
  return "?";
}

Expr Expr::int_lit(std::int64_t v, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::IntLit;
  e.int_value = v;
  e.loc = std::move(loc);
  return e;
}

Expr Expr::bool_lit(bool v, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::BoolLit;
  e.bool_value = v;
  e.loc = std::move(loc);
  return e;
}

Expr Expr::string_lit(std::string v, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::StringLit;
  e.text = std::move(v);
  e.loc = std::move(loc);
  return e;
}

Expr Expr::var(std::string name, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  e.loc = std::move(loc);
  return e;
}

Expr Expr::self(SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::Self;
  e.loc = std::move(loc);
  return e;
}

Expr Expr::nav(Expr receiver, std::string member, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::Nav;
  e.name = std::move(member);
  e.args.push_back(std::move(receiver));
  e.loc = std::move(loc);
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  e.loc = std::move(loc);
  return e;
}

Expr Expr::unary(Op op, Expr operand, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.op = op;
  e.args.push_back(std::move(operand));
  e.loc = std::move(loc);
  return e;
}

Expr Expr::coll(Expr receiver, std::string op, std::vector<Expr> rest, std::string iter,
                SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::CollOp;
  e.name = std::move(op);
  e.iter = std::move(iter);
  e.args.push_back(std::move(receiver));
  for (auto& r : rest) e.args.push_back(std::move(r));
  e.loc = std::move(loc);
  return e;
}

Expr Expr::all_instances(std::string cls, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::AllInstances;
  e.name = std::move(cls);
  e.loc = std::move(loc);
  return e;
}

Expr Expr::in_state(Expr receiver, std::string state, SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::InState;
  e.name = std::move(state);
  e.args.push_back(std::move(receiver));
  e.loc = std::move(loc);
  return e;
}

Expr Expr::call(Expr receiver, std::string method, std::vector<Expr> call_args,
                SourceLocation loc) {
  Expr e;
  e.kind = ExprKind::Call;
  e.name = std::move(method);
  e.args.push_back(std::move(receiver));
  for (auto& a : call_args) e.args.push_back(std::move(a));
  e.loc = std::move(loc);
  return e;
}

bool is_collection_op(const std::string& name) {
  return name == "size" || name == "isEmpty" || name == "includes" || is_iterator_op(name);
}

bool is_iterator_op(const std::string& name) {
  return name == "forAll" || name == "exists" || name == "select";
}

bool MethodDef::same_signature(const MethodDef& other) const {
  if (name != other.name || return_type != other.return_type) return false;
  if (params.size() != other.params.size()) return false;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].type != other.params[i].type) return false;
  return true;
}

bool MethodDef::is_single_return() const {
  return body && body->size() == 1 && body->front().kind == StmtKind::Return;
}

bool Statechart::has_state(const std::string& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

bool Statechart::is_trigger(const std::string& method) const {
  return std::any_of(transitions.begin(), transitions.end(),
                     [&](const Transition& t) { return t.trigger == method; });
}

const AttributeDef* ClassDef::find_attribute(const std::string& n) const {
  for (const auto& a : attributes)
    if (a.name == n) return &a;
  return nullptr;
}

const MethodDef* ClassDef::find_method(const std::string& n) const {
  for (const auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

MethodDef* ClassDef::find_method(const std::string& n) {
  for (auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

const char* to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::One: return "1";
    case Multiplicity::ZeroOrOne: return "0..1";
    case Multiplicity::Many: return "*";
  }
  return "*";
}

bool is_single(Multiplicity m) { return m != Multiplicity::Many; }

const ClassDef* Model::find_class(const std::string& n) const {
  for (const auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

ClassDef* Model::find_class(const std::string& n) {
  for (auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

const AssocDef* Model::find_association(const std::string& n) const {
  for (const auto& a : associations)
    if (a.name == n) return &a;
  return nullptr;
}

std::vector<const ClassDef*> ancestry(const Model& model, const std::string& cls) {
  std::vector<const ClassDef*> chain;
  std::set<std::string> seen;
  const ClassDef* c = model.find_class(cls);
  while (c && seen.insert(c->name).second) {
    chain.push_back(c);
    c = c->superclass ? model.find_class(*c->superclass) : nullptr;
  }
  return chain;
}

bool is_subclass_of(const Model& model, const std::string& cls, const std::string& ancestor) {
  for (const ClassDef* c : ancestry(model, cls))
    if (c->name == ancestor) return true;
  return false;
}

std::vector<std::string> subtree(const Model& model, const std::string& cls) {
  std::vector<std::string> out;
  for (const auto& c : model.classes)
    if (is_subclass_of(model, c.name, cls)) out.push_back(c.name);
  return out;
}

std::vector<AttributeDef> effective_attributes(const Model& model, const std::string& cls) {
  if (!model.find_class(cls)) throw ModelError("unknown-class", "unknown class '" + cls + "'");
  auto chain = ancestry(model, cls);
  std::vector<AttributeDef> out;
  std::set<std::string> names;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    for (const auto& a : (*it)->attributes)
      if (names.insert(a.name).second) out.push_back(a);
  return out;
}

const MethodDef* find_method_on_chain(const Model& model, const std::string& cls,
                                      const std::string& method) {
  for (const ClassDef* c : ancestry(model, cls))
    if (const MethodDef* m = c->find_method(method)) return m;
  return nullptr;
}

const MethodDef& resolve_method(const Model& model, const std::string& cls,
                                const std::string& method) {
  if (!model.find_class(cls)) throw ModelError("unknown-class", "unknown class '" + cls + "'");
  if (const MethodDef* m = find_method_on_chain(model, cls, method)) return *m;
  throw ModelError("no-such-method", "class '" + cls + "' has no method '" + method + "'");
}

const ClassDef* declaring_class(const Model& model, const std::string& cls,
                                const std::string& method) {
  for (const ClassDef* c : ancestry(model, cls))
    if (c->find_method(method)) return c;
  return nullptr;
}

const Statechart* effective_statechart(const Model& model, const std::string& cls) {
  for (const ClassDef* c : ancestry(model, cls))
    if (c->statechart) return &*c->statechart;
  return nullptr;
}

std::vector<std::string> unimplemented_abstract_methods(const Model& model,
                                                        const std::string& cls) {
  std::vector<std::string> out;
  for (const MethodDef* m : effective_methods(model, cls))
    if (m->is_abstract) out.push_back(m->name);
  return out;
}

bool is_abstract_class(const Model& model, const std::string& cls) {
  return !unimplemented_abstract_methods(model, cls).empty();
}

std::vector<RoleInfo> roles_of(const Model& model, const std::string& cls) {
  std::vector<RoleInfo> out;
  for (const auto& a : model.associations) {
    if (is_subclass_of(model, cls, a.end_a.class_name)) out.push_back({&a, true});
    if (is_subclass_of(model, cls, a.end_b.class_name)) out.push_back({&a, false});
  }
  return out;
}

std::optional<RoleInfo> find_role(const Model& model, const std::string& cls,
                                  const std::string& role) {
  for (const RoleInfo& r : roles_of(model, cls))
    if (r.far().role == role) return r;
  return std::nullopt;
}

std::vector<const MethodDef*> effective_methods(const Model& model, const std::string& cls) {
  std::vector<const MethodDef*> out;
  std::set<std::string> names;
  for (const ClassDef* c : ancestry(model, cls))
    for (const auto& m : c->methods)
      if (names.insert(m.name).second) out.push_back(&m);
  return out;
}

}  // namespace agm
