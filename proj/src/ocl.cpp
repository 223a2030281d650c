#include "agm/ocl.hpp"

#include <limits>

namespace agm {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::UndefinedNavigation: return "undefined-navigation";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::UnboundVariable: return "unbound-variable";
    case ErrorKind::IntegerOverflow: return "integer-overflow";
    case ErrorKind::TypeError: return "type-error";
    case ErrorKind::BudgetExhausted: return "budget-exhausted";
    case ErrorKind::NoSuchMethod: return "no-such-method";
    case ErrorKind::AbstractCall: return "abstract-call";
    case ErrorKind::NoEnabledTransition: return "no-enabled-transition";
    case ErrorKind::NondeterministicStatechart: return "nondeterministic-statechart";
    case ErrorKind::AbstractInstantiation: return "abstract-instantiation";
    case ErrorKind::MultiplicityViolation: return "multiplicity-violation";
    case ErrorKind::MissingRequiredAttribute: return "missing-required-attribute";
    case ErrorKind::MissingReturn: return "missing-return";
    case ErrorKind::UnknownClass: return "unknown-class";
  }
  return "error";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
  }
  return "error";
}

std::int64_t OclEvaluator::as_int(const Value& v, const Expr& at) const {
  if (auto p = std::get_if<std::int64_t>(&v)) return *p;
  throw EvalError(ErrorKind::TypeError, std::string("expected Int, found ") + value_kind(v), at.loc);
}

bool OclEvaluator::as_bool(const Value& v, const Expr& at) const {
  if (auto p = std::get_if<bool>(&v)) return *p;
  throw EvalError(ErrorKind::TypeError, std::string("expected Bool, found ") + value_kind(v), at.loc);
}

ObjRef OclEvaluator::as_obj(const Value& v, const Expr& at) const {
  if (auto p = std::get_if<ObjRef>(&v)) return *p;
  throw EvalError(ErrorKind::TypeError, std::string("expected object, found ") + value_kind(v),
                  at.loc);
}

const ObjSet& OclEvaluator::as_set(const Value& v, const Expr& at) const {
  if (auto p = std::get_if<ObjSet>(&v)) return *p;
  throw EvalError(ErrorKind::TypeError, std::string("expected collection, found ") + value_kind(v),
                  at.loc);
}

bool OclEvaluator::eval_bool(const Expr& e, const Env& env) { return as_bool(eval(e, env), e); }

Value OclEvaluator::eval(const Expr& e, const Env& env) {
  switch (e.kind) {
    case ExprKind::IntLit: return e.int_value;
    case ExprKind::BoolLit: return e.bool_value;
    case ExprKind::StringLit: return e.text;
    case ExprKind::Var:
    case ExprKind::Self: {
      const std::string& key = e.kind == ExprKind::Self ? std::string("self") : e.name;
      auto it = env.find(key);
      if (it == env.end())
        throw EvalError(ErrorKind::UnboundVariable, "unbound variable '" + key + "'", e.loc);
      return it->second;
    }
    case ExprKind::Nav: return eval_nav(e, env);
    case ExprKind::Binary: return eval_binary(e, env);
    case ExprKind::Unary: {
      Value v = eval(e.args[0], env);
      if (e.op == Op::Not) return !as_bool(v, e.args[0]);
      std::int64_t i = as_int(v, e.args[0]);
      if (i == std::numeric_limits<std::int64_t>::min())
        throw EvalError(ErrorKind::IntegerOverflow, "integer overflow in negation", e.loc);
      return -i;
    }
    case ExprKind::CollOp: return eval_coll(e, env);
    case ExprKind::AllInstances: {
      if (!model_.find_class(e.name))
        throw EvalError(ErrorKind::UnknownClass, "unknown class '" + e.name + "'", e.loc);
      return ObjSet{space_.instances_of(model_, e.name)};
    }
    case ExprKind::InState: {
      ObjRef r = as_obj(eval(e.args[0], env), e.args[0]);
      const auto& state = space_.at(r).state;
      return state.has_value() && *state == e.name;
    }
    case ExprKind::Call: {
      auto v = eval_call(e, env);
      if (!v)
        throw EvalError(ErrorKind::TypeError, "method '" + e.name + "' returns no value", e.loc);
      return std::move(*v);
    }
  }
  throw EvalError(ErrorKind::TypeError, "unsupported expression", e.loc);
}

Value OclEvaluator::eval_nav(const Expr& e, const Env& env) {
  ObjRef r = as_obj(eval(e.args[0], env), e.args[0]);
  const Object& obj = space_.at(r);
  auto attr = obj.attrs.find(e.name);
  if (attr != obj.attrs.end()) return attr->second;
  auto role = find_role(model_, obj.class_name, e.name);
  if (!role)
    throw EvalError(ErrorKind::TypeError,
                    "object #" + std::to_string(r.id) + " of class '" + obj.class_name +
                        "' has no member '" + e.name + "'",
                    e.loc);
  std::vector<ObjRef> partners = space_.linked(*role, r);
  if (!is_single(role->far().multiplicity)) return ObjSet{std::move(partners)};
  if (partners.empty())
    throw EvalError(ErrorKind::UndefinedNavigation,
                    "role '" + e.name + "' of object #" + std::to_string(r.id) + " is unset",
                    e.loc);
  if (partners.size() > 1)
    throw EvalError(ErrorKind::MultiplicityViolation,
                    "role '" + e.name + "' of object #" + std::to_string(r.id) +
                        " has more than one partner",
                    e.loc);
  return partners.front();
}

Value OclEvaluator::eval_binary(const Expr& e, const Env& env) {
  const Expr& lhs = e.args[0];
  const Expr& rhs = e.args[1];
  switch (e.op) {
    case Op::And:
      if (!as_bool(eval(lhs, env), lhs)) return false;
      return as_bool(eval(rhs, env), rhs);
    case Op::Or:
      if (as_bool(eval(lhs, env), lhs)) return true;
      return as_bool(eval(rhs, env), rhs);
    case Op::Implies:
      if (!as_bool(eval(lhs, env), lhs)) return true;
      return as_bool(eval(rhs, env), rhs);
    default:
      break;
  }
  Value l = eval(lhs, env);
  Value r = eval(rhs, env);
  if (e.op == Op::Eq || e.op == Op::Ne) {
    if (l.index() != r.index())
      throw EvalError(ErrorKind::TypeError,
                      std::string("cannot compare ") + value_kind(l) + " with " + value_kind(r),
                      e.loc);
    return (l == r) == (e.op == Op::Eq);
  }
  std::int64_t a = as_int(l, lhs);
  std::int64_t b = as_int(r, rhs);
  std::int64_t out = 0;
  switch (e.op) {
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Gt: return a > b;
    case Op::Ge: return a >= b;
    case Op::Add:
      if (__builtin_add_overflow(a, b, &out))
        throw EvalError(ErrorKind::IntegerOverflow, "integer overflow in '+'", e.loc);
      return out;
    case Op::Sub:
      if (__builtin_sub_overflow(a, b, &out))
        throw EvalError(ErrorKind::IntegerOverflow, "integer overflow in '-'", e.loc);
      return out;
    case Op::Mul:
      if (__builtin_mul_overflow(a, b, &out))
        throw EvalError(ErrorKind::IntegerOverflow, "integer overflow in '*'", e.loc);
      return out;
    case Op::Div:
      if (b == 0) throw EvalError(ErrorKind::DivisionByZero, "division by zero", e.loc);
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
        throw EvalError(ErrorKind::IntegerOverflow, "integer overflow in '/'", e.loc);
      return a / b;
    default:
      throw EvalError(ErrorKind::TypeError, "bad operator", e.loc);
  }
}

// Iterator bodies are evaluated for every element in ascending object order;
// the first error raised propagates.
Value OclEvaluator::eval_coll(const Expr& e, const Env& env) {
  Value recv_v = eval(e.args[0], env);
  const ObjSet& recv = as_set(recv_v, e.args[0]);
  if (e.name == "size") return static_cast<std::int64_t>(recv.items.size());
  if (e.name == "isEmpty") return recv.items.empty();
  if (e.name == "includes") return recv.contains(as_obj(eval(e.args[1], env), e.args[1]));

  Env inner = env;
  std::vector<ObjRef> selected;
  bool all = true;
  bool any = false;
  for (ObjRef item : recv.items) {
    inner[e.iter] = item;
    bool b = eval_bool(e.args[1], inner);
    all = all && b;
    any = any || b;
    if (b) selected.push_back(item);
  }
  if (e.name == "forAll") return all;
  if (e.name == "exists") return any;
  return ObjSet{std::move(selected)};
}

std::optional<Value> OclEvaluator::eval_call(const Expr& call, const Env& env) {
  ObjRef target = as_obj(eval(call.args[0], env), call.args[0]);
  std::vector<Value> args;
  for (std::size_t i = 1; i < call.args.size(); ++i) args.push_back(eval(call.args[i], env));
  if (calls_) return calls_->invoke(target, call.name, std::move(args), call.loc);
  return call_query(target, call.name, args, call.loc);
}

std::optional<Value> OclEvaluator::call_query(ObjRef target, const std::string& method,
                                              const std::vector<Value>& args,
                                              const SourceLocation& loc) {
  const std::string& cls = space_.at(target).class_name;
  const MethodDef* m = find_method_on_chain(model_, cls, method);
  if (!m)
    throw EvalError(ErrorKind::NoSuchMethod, "class '" + cls + "' has no method '" + method + "'",
                    loc);
  if (m->is_abstract || !m->body)
    throw EvalError(ErrorKind::AbstractCall, "'" + cls + "." + method + "' is abstract", loc);
  if (!m->is_single_return())
    throw EvalError(ErrorKind::TypeError, "'" + method + "' is not a query method", loc);
  if (depth_ >= max_depth_)
    throw EvalError(ErrorKind::BudgetExhausted, "query call depth limit reached", loc);
  Env inner;
  inner["self"] = target;
  for (std::size_t i = 0; i < m->params.size() && i < args.size(); ++i)
    inner[m->params[i].name] = args[i];
  ++depth_;
  struct Guard {
    std::size_t& d;
    ~Guard() { --d; }
  } guard{depth_};
  return eval(m->body->front().value, inner);
}

Value eval_ocl(const Expr& expr, const Model& model, const ObjectSpace& space, const Env& env) {
  OclEvaluator ev(model, space);
  return ev.eval(expr, env);
}

std::vector<InvariantResult> check_invariants(const Model& model, const ObjectSpace& space) {
  std::vector<InvariantResult> out;
  for (const auto& inv : model.invariants) {
    for (ObjRef r : space.instances_of(model, inv.context)) {
      InvariantResult res;
      res.invariant = inv.name;
      res.object = r;
      try {
        OclEvaluator ev(model, space);
        res.verdict = ev.eval_bool(inv.expr, Env{{"self", r}}) ? Verdict::Pass : Verdict::Fail;
      } catch (const EvalError& e) {
        res.verdict = Verdict::Error;
        res.message = std::string(to_string(e.kind())) + ": " + e.what();
      }
      out.push_back(std::move(res));
    }
  }
  return out;
}

}  // namespace agm
