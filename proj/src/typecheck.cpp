#include "agm/typecheck.hpp"

#include <set>

namespace agm {

Type Type::of(const TypeRef& ref) {
  if (ref.name == "Int") return {Int, {}};
  if (ref.name == "Bool") return {Bool, {}};
  if (ref.name == "String") return {String, {}};
  return object(ref.name);
}

std::string Type::str() const {
  switch (kind) {
    case Int: return "Int";
    case Bool: return "Bool";
    case String: return "String";
    case Object: return cls;
    case Set: return "Set(" + cls + ")";
    case Void: return "Void";
    case Error: return "<error>";
  }
  return "?";
}

Type TypeChecker::error(const std::string& code, const std::string& msg,
                        const SourceLocation& loc) {
  issues_.push_back({code, msg, loc});
  return {};
}

bool TypeChecker::assignable(const Type& from, const Type& to) const {
  if (from.kind == Type::Error || to.kind == Type::Error) return true;
  if (from.kind != to.kind) return false;
  if (from.kind == Type::Object || from.kind == Type::Set)
    return is_subclass_of(model_, from.cls, to.cls);
  return true;
}

bool TypeChecker::is_query_call(const std::string& cls, const std::string& method) const {
  const MethodDef* resolved = find_method_on_chain(model_, cls, method);
  if (!resolved) return false;
  auto pure = [](const MethodDef& m) { return m.is_abstract || m.is_single_return(); };
  if (!pure(*resolved)) return false;
  for (const auto& name : subtree(model_, cls)) {
    if (const MethodDef* m = model_.find_class(name)->find_method(method))
      if (!pure(*m)) return false;
  }
  return true;
}

void TypeChecker::check_condition(const Expr& e, const Scope& scope, EvalContext ctx,
                                  const char* what) {
  Type t = check_expr(e, scope, ctx);
  if (t.kind != Type::Bool && t.kind != Type::Error)
    error("type-error", std::string(what) + " must be Bool, found " + t.str(), e.loc);
}

Type TypeChecker::check_call(const Expr& e, const Scope& scope, EvalContext ctx) {
  Type recv = check_expr(e.args[0], scope, ctx);
  std::vector<Type> arg_types;
  for (std::size_t i = 1; i < e.args.size(); ++i) arg_types.push_back(check_expr(e.args[i], scope, ctx));
  if (recv.kind == Type::Error || !known(recv)) return {};
  if (recv.kind != Type::Object)
    return error("type-error", "method call on non-object of type " + recv.str(), e.loc);
  const MethodDef* m = find_method_on_chain(model_, recv.cls, e.name);
  if (!m)
    return error("unknown-method", "class '" + recv.cls + "' has no method '" + e.name + "'",
                 e.loc);
  if (hook_) hook_(e, recv.cls, MemberKind::Method);
  if (m->params.size() != arg_types.size())
    return error("arity-mismatch",
                 "method '" + e.name + "' expects " + std::to_string(m->params.size()) +
                     " argument(s), got " + std::to_string(arg_types.size()),
                 e.loc);
  for (std::size_t i = 0; i < arg_types.size(); ++i) {
    Type want = Type::of(m->params[i].type);
    if (!assignable(arg_types[i], want))
      error("type-error",
            "argument " + std::to_string(i + 1) + " of '" + e.name + "' must be " + want.str() +
                ", found " + arg_types[i].str(),
            e.args[i + 1].loc);
  }
  if (ctx == EvalContext::Query && !is_query_call(recv.cls, e.name))
    error("non-query-call",
          "'" + recv.cls + "." + e.name + "' is not a query method (body must be a single return)",
          e.loc);
  if (!m->return_type) return {Type::Void, {}};
  return Type::of(*m->return_type);
}

Type TypeChecker::check_expr(const Expr& e, const Scope& scope, EvalContext ctx) {
  switch (e.kind) {
    case ExprKind::IntLit: return {Type::Int, {}};
    case ExprKind::BoolLit: return {Type::Bool, {}};
    case ExprKind::StringLit: return {Type::String, {}};
    case ExprKind::Var: {
      auto it = scope.vars.find(e.name);
      if (it == scope.vars.end())
        return error("unknown-variable", "unbound variable '" + e.name + "'", e.loc);
      return it->second;
    }
    case ExprKind::Self:
      if (scope.self_class.empty()) return error("no-self", "'self' is not available here", e.loc);
      return Type::object(scope.self_class);
    case ExprKind::Nav: {
      Type recv = check_expr(e.args[0], scope, ctx);
      if (recv.kind == Type::Error || !known(recv)) return {};
      if (recv.kind != Type::Object)
        return error("type-error", "cannot navigate '" + e.name + "' on " + recv.str(), e.loc);
      for (const auto& a : effective_attributes(model_, recv.cls)) {
        if (a.name == e.name) {
          if (hook_) hook_(e, recv.cls, MemberKind::Attribute);
          return Type::of(a.type);
        }
      }
      if (auto role = find_role(model_, recv.cls, e.name)) {
        if (hook_) hook_(e, recv.cls, MemberKind::Role);
        const AssocEnd& far = role->far();
        if (is_single(far.multiplicity)) return Type::object(far.class_name);
        return Type::set(far.class_name);
      }
      return error("unknown-member",
                   "class '" + recv.cls + "' has no attribute or role '" + e.name + "'", e.loc);
    }
    case ExprKind::Unary: {
      Type t = check_expr(e.args[0], scope, ctx);
      Type::Kind want = e.op == Op::Not ? Type::Bool : Type::Int;
      if (t.kind != Type::Error && t.kind != want)
        error("type-error", std::string("operand of '") + op_symbol(e.op) + "' has type " + t.str(),
              e.loc);
      return {want, {}};
    }
    case ExprKind::Binary: {
      Type l = check_expr(e.args[0], scope, ctx);
      Type r = check_expr(e.args[1], scope, ctx);
      bool err = l.kind == Type::Error || r.kind == Type::Error;
      auto mismatch = [&] {
        error("type-error",
              std::string("operator '") + op_symbol(e.op) + "' not applicable to " + l.str() +
                  " and " + r.str(),
              e.loc);
      };
      switch (e.op) {
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
          if (!err && (l.kind != Type::Int || r.kind != Type::Int)) mismatch();
          return {Type::Int, {}};
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
          if (!err && (l.kind != Type::Int || r.kind != Type::Int)) mismatch();
          return {Type::Bool, {}};
        case Op::Eq:
        case Op::Ne: {
          if (err) return {Type::Bool, {}};
          bool ok = l.kind == r.kind && l.kind != Type::Void;
          if (ok && (l.kind == Type::Object || l.kind == Type::Set))
            ok = is_subclass_of(model_, l.cls, r.cls) || is_subclass_of(model_, r.cls, l.cls);
          if (!ok) mismatch();
          return {Type::Bool, {}};
        }
        case Op::And:
        case Op::Or:
        case Op::Implies:
          if (!err && (l.kind != Type::Bool || r.kind != Type::Bool)) mismatch();
          return {Type::Bool, {}};
        default:
          return error("type-error", "bad binary operator", e.loc);
      }
    }
    case ExprKind::CollOp: {
      Type recv = check_expr(e.args[0], scope, ctx);
      if (recv.kind != Type::Error && recv.kind != Type::Set) {
        error("type-error", "'->" + e.name + "' requires a collection, found " + recv.str(), e.loc);
        recv = {};
      }
      if (e.name == "size") return {Type::Int, {}};
      if (e.name == "isEmpty") return {Type::Bool, {}};
      if (e.name == "includes") {
        Type arg = check_expr(e.args[1], scope, ctx);
        if (arg.kind != Type::Error && arg.kind != Type::Object)
          error("type-error", "'->includes' expects an object, found " + arg.str(), e.args[1].loc);
        return {Type::Bool, {}};
      }
      Scope inner = scope;
      inner.vars[e.iter] = recv.kind == Type::Set ? Type::object(recv.cls) : Type{};
      Type body = check_expr(e.args[1], inner, ctx);
      if (body.kind != Type::Error && body.kind != Type::Bool)
        error("type-error", "'->" + e.name + "' body must be Bool, found " + body.str(),
              e.args[1].loc);
      if (e.name == "select") return recv.kind == Type::Set ? recv : Type{};
      return {Type::Bool, {}};
    }
    case ExprKind::AllInstances:
      if (!model_.find_class(e.name))
        return error("unknown-class", "unknown class '" + e.name + "'", e.loc);
      return Type::set(e.name);
    case ExprKind::InState: {
      Type recv = check_expr(e.args[0], scope, ctx);
      if (recv.kind == Type::Error || !known(recv)) return {Type::Bool, {}};
      if (recv.kind != Type::Object)
        return error("type-error", "'oclInState' requires an object, found " + recv.str(), e.loc);
      const Statechart* sc = effective_statechart(model_, recv.cls);
      if (!sc)
        return error("unknown-state", "class '" + recv.cls + "' has no statechart", e.loc);
      if (!sc->has_state(e.name))
        return error("unknown-state",
                     "statechart of '" + recv.cls + "' has no state '" + e.name + "'", e.loc);
      return {Type::Bool, {}};
    }
    case ExprKind::Call: {
      Type t = check_call(e, scope, ctx);
      if (t.kind == Type::Void && ctx == EvalContext::Query)
        return error("type-error", "method '" + e.name + "' returns no value", e.loc);
      return t;
    }
  }
  return {};
}

void TypeChecker::check_method(const ClassDef& owner, const MethodDef& m) {
  if (!m.body) return;
  Scope scope;
  scope.self_class = owner.name;
  for (const auto& p : m.params) scope.vars[p.name] = Type::of(p.type);
  check_block(*m.body, scope, m, m.is_single_return() ? EvalContext::Query : EvalContext::Action);
}

void TypeChecker::check_block(const Block& block, Scope& scope, const MethodDef& m,
                              EvalContext ctx) {
  for (const auto& s : block) check_stmt(s, scope, m, ctx);
}

void TypeChecker::check_stmt(const Stmt& s, Scope& scope, const MethodDef& m, EvalContext ctx) {
  auto fresh = [&](const std::string& name, const SourceLocation& loc) {
    if (scope.vars.count(name) || name == "self") {
      error("local-reassigned", "local '" + name + "' is already bound", loc);
      return false;
    }
    return true;
  };

  switch (s.kind) {
    case StmtKind::Assign: {
      Type recv = check_expr(s.target.args[0], scope, ctx);
      Type value = check_expr(s.value, scope, ctx);
      if (recv.kind == Type::Error || !known(recv)) return;
      if (recv.kind != Type::Object) {
        error("type-error", "cannot assign a member of " + recv.str(), s.loc);
        return;
      }
      for (const auto& a : effective_attributes(model_, recv.cls)) {
        if (a.name == s.target.name) {
          if (hook_) hook_(s.target, recv.cls, MemberKind::Attribute);
          Type want = Type::of(a.type);
          if (!assignable(value, want))
            error("type-error",
                  "cannot assign " + value.str() + " to attribute '" + a.name + "' of type " +
                      want.str(),
                  s.value.loc);
          return;
        }
      }
      if (find_role(model_, recv.cls, s.target.name)) {
        error("type-error", "role '" + s.target.name + "' is changed with '+=' or '-='", s.loc);
        return;
      }
      error("unknown-member", "class '" + recv.cls + "' has no attribute '" + s.target.name + "'",
            s.target.loc);
      return;
    }
    case StmtKind::Bind: {
      Type value = check_expr(s.value, scope, ctx);
      if (value.kind == Type::Void) error("type-error", "call returns no value", s.value.loc);
      if (fresh(s.name, s.loc)) scope.vars[s.name] = value;
      return;
    }
    case StmtKind::Call:
      check_call(s.target, scope, ctx);
      return;
    case StmtKind::Create: {
      const ClassDef* c = model_.find_class(s.class_name);
      if (!c) {
        for (const auto& init : s.inits) check_expr(init.value, scope, ctx);
        error("unknown-class", "unknown class '" + s.class_name + "'", s.loc);
        if (fresh(s.name, s.loc)) scope.vars[s.name] = {};
        return;
      }
      if (is_abstract_class(model_, s.class_name))
        error("abstract-instantiation", "class '" + s.class_name + "' is abstract", s.loc);
      auto attrs = effective_attributes(model_, s.class_name);
      std::set<std::string> given;
      for (const auto& init : s.inits) {
        if (!given.insert(init.name).second)
          error("duplicate-initializer", "attribute '" + init.name + "' initialized twice", s.loc);
        const AttributeDef* found = nullptr;
        for (const auto& a : attrs)
          if (a.name == init.name) found = &a;
        if (!found) {
          error("unknown-member",
                "class '" + s.class_name + "' has no attribute '" + init.name + "'", s.loc);
          continue;
        }
        Type value = check_expr(init.value, scope, ctx);
        if (!assignable(value, Type::of(found->type)))
          error("type-error", "initializer for '" + init.name + "' has type " + value.str(),
                init.value.loc);
      }
      for (const auto& a : attrs)
        if (!a.type.is_primitive() && !given.count(a.name))
          error("missing-required-attribute",
                "object attribute '" + a.name + "' of '" + s.class_name + "' must be set", s.loc);
      if (fresh(s.name, s.loc)) scope.vars[s.name] = Type::object(s.class_name);
      return;
    }
    case StmtKind::LinkAdd:
    case StmtKind::LinkRemove: {
      Type recv = check_expr(s.target.args[0], scope, ctx);
      Type value = check_expr(s.value, scope, ctx);
      if (recv.kind == Type::Error || !known(recv)) return;
      if (recv.kind != Type::Object) {
        error("type-error", "cannot link from " + recv.str(), s.loc);
        return;
      }
      auto role = find_role(model_, recv.cls, s.target.name);
      if (!role) {
        error("unknown-member", "class '" + recv.cls + "' has no role '" + s.target.name + "'",
              s.target.loc);
        return;
      }
      if (hook_) hook_(s.target, recv.cls, MemberKind::Role);
      if (!assignable(value, Type::object(role->far().class_name)))
        error("type-error",
              "role '" + s.target.name + "' links " + role->far().class_name + ", found " +
                  value.str(),
              s.value.loc);
      return;
    }
    case StmtKind::Return: {
      Type value = check_expr(s.value, scope, ctx);
      if (!m.return_type) {
        error("return-type-mismatch", "method '" + m.name + "' declares no return type", s.loc);
      } else if (!assignable(value, Type::of(*m.return_type)) || value.kind == Type::Void) {
        error("return-type-mismatch",
              "method '" + m.name + "' returns " + m.return_type->name + ", found " + value.str(),
              s.value.loc);
      }
      return;
    }
    case StmtKind::If: {
      check_condition(s.value, scope, ctx, "if condition");
      Scope then_scope = scope;
      check_block(s.body, then_scope, m, ctx);
      if (s.has_else) {
        Scope else_scope = scope;
        check_block(s.else_body, else_scope, m, ctx);
      }
      return;
    }
    case StmtKind::Foreach: {
      Type coll = check_expr(s.target, scope, ctx);
      Scope inner = scope;
      if (coll.kind != Type::Error && coll.kind != Type::Set)
        error("type-error", "foreach requires a collection, found " + coll.str(), s.target.loc);
      if (fresh(s.name, s.loc))
        inner.vars[s.name] = coll.kind == Type::Set ? Type::object(coll.cls) : Type{};
      check_block(s.body, inner, m, ctx);
      return;
    }
  }
}

}  // namespace agm
