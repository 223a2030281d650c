#include "agm/runtime.hpp"

#include <set>

namespace agm {

namespace {

std::string obj_name(ObjRef r, const ObjectSpace* space) {
  if (space && space->valid(r) && !space->at(r).label.empty()) return space->at(r).label;
  return "#" + std::to_string(r.id);
}

void init_attributes(const Model& model, Object& obj) {
  for (const auto& a : effective_attributes(model, obj.class_name))
    if (auto v = default_value(a.type)) obj.attrs[a.name] = *v;
}

void require_attributes(const Model& model, ObjRef r, const Object& obj,
                        const std::set<std::string>& given, const SourceLocation& loc) {
  for (const auto& a : effective_attributes(model, obj.class_name))
    if (!a.type.is_primitive() && !given.count(a.name))
      throw EvalError(ErrorKind::MissingRequiredAttribute,
                      "object " + obj_name(r, nullptr) + " of class '" + obj.class_name +
                          "' needs a value for object-typed attribute '" + a.name + "'",
                      loc);
}

void check_instantiable(const Model& model, const std::string& cls, const SourceLocation& loc) {
  if (!model.find_class(cls))
    throw EvalError(ErrorKind::UnknownClass, "unknown class '" + cls + "'", loc);
  if (is_abstract_class(model, cls))
    throw EvalError(ErrorKind::AbstractInstantiation,
                    "cannot instantiate abstract class '" + cls + "'", loc);
}

void enter_initial_state(const Model& model, Object& obj) {
  if (const Statechart* sc = effective_statechart(model, obj.class_name)) obj.state = sc->initial;
}

}  // namespace

std::string format_event(const TraceEvent& e, const ObjectSpace* space) {
  if (e.kind == TraceEvent::Return) {
    std::string out = "return " + obj_name(e.callee, space) + "." + e.method;
    if (e.value) out += " = " + format_value(*e.value);
    return out;
  }
  std::string out = (e.caller ? obj_name(*e.caller, space) : std::string(kTester)) + " -> " +
                    obj_name(e.callee, space) + " : " + e.method + "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out += ", ";
    out += format_value(e.args[i]);
  }
  return out + ")";
}

Env setup_bindings(const Setup& setup) {
  Env env;
  for (std::uint32_t i = 0; i < setup.objects.size(); ++i) env[setup.objects[i].name] = ObjRef{i};
  return env;
}

ObjectSpace instantiate(const Model& model, const Setup& setup) {
  ObjectSpace space;
  for (const auto& o : setup.objects) {
    check_instantiable(model, o.class_name, o.loc);
    ObjRef r = space.create(o.class_name, o.name);
    init_attributes(model, space.at(r));
    enter_initial_state(model, space.at(r));
  }
  Env env = setup_bindings(setup);
  for (std::uint32_t i = 0; i < setup.objects.size(); ++i) {
    const auto& o = setup.objects[i];
    std::set<std::string> given;
    for (const auto& init : o.inits) {
      // Evaluate against the space as it stands; initializers only read
      // literals and object names in practice.
      Value v = eval_ocl(init.value, model, space, env);
      space.at(ObjRef{i}).attrs[init.name] = std::move(v);
      given.insert(init.name);
    }
    require_attributes(model, ObjRef{i}, space.at(ObjRef{i}), given, o.loc);
  }
  for (const auto& l : setup.links) {
    auto src = env.find(l.source);
    auto dst = env.find(l.target);
    if (src == env.end() || dst == env.end())
      throw EvalError(ErrorKind::UnboundVariable, "link between unknown objects", l.loc);
    ObjRef from = std::get<ObjRef>(src->second);
    ObjRef to = std::get<ObjRef>(dst->second);
    auto role = find_role(model, space.at(from).class_name, l.role);
    if (!role)
      throw EvalError(ErrorKind::TypeError, "class '" + space.at(from).class_name +
                                                "' has no role '" + l.role + "'",
                      l.loc);
    if (!is_subclass_of(model, space.at(to).class_name, role->far().class_name))
      throw EvalError(ErrorKind::TypeError,
                      "role '" + l.role + "' cannot link a " + space.at(to).class_name, l.loc);
    space.add_link(ObjectSpace::make_link(*role, from, to));
  }
  if (auto v = find_multiplicity_violation(model, space))
    throw EvalError(ErrorKind::MultiplicityViolation, *v);
  return space;
}

// ---------------------------------------------------------------------------

void Interpreter::step(const SourceLocation& loc) {
  if (++steps_ > options_.budget.max_steps)
    throw EvalError(ErrorKind::BudgetExhausted,
                    "step limit of " + std::to_string(options_.budget.max_steps) + " reached", loc);
}

std::optional<Value> Interpreter::invoke(ObjRef target, const std::string& method,
                                         std::vector<Value> args, const SourceLocation& loc) {
  return call(stack_.empty() ? std::nullopt : std::optional<ObjRef>(stack_.back()), target, method,
              std::move(args), loc);
}

void Interpreter::fire_transition(ObjRef target, const Statechart& sc, const MethodDef& m,
                                  const std::vector<Value>& args, const SourceLocation& loc,
                                  bool& discarded) {
  Object& obj = space_.at(target);
  const std::string current = obj.state.value_or(sc.initial);
  Env env;
  env["self"] = target;
  for (std::size_t i = 0; i < m.params.size() && i < args.size(); ++i)
    env[m.params[i].name] = args[i];
  const Transition* chosen = nullptr;
  for (const auto& t : sc.transitions) {
    if (t.source != current || t.trigger != m.name) continue;
    bool enabled = true;
    if (t.guard) {
      OclEvaluator ev(model_, space_, nullptr, options_.budget.max_depth);
      enabled = ev.eval_bool(*t.guard, env);
    }
    if (!enabled) continue;
    if (chosen)
      throw EvalError(ErrorKind::NondeterministicStatechart,
                      "more than one transition enabled for '" + m.name + "' in state " + current,
                      loc);
    chosen = &t;
  }
  if (!chosen) {
    if (options_.ignore_unexpected_events && !m.return_type) {
      discarded = true;
      return;
    }
    throw EvalError(ErrorKind::NoEnabledTransition,
                    "no transition enabled for '" + m.name + "' in state " + current, loc);
  }
  obj.state = chosen->target;
  if (options_.on_transition) options_.on_transition(target, *chosen);
}

std::optional<Value> Interpreter::trigger(const Expr& call_expr, const Env& env) {
  OclEvaluator ev(model_, space_, nullptr, options_.budget.max_depth);
  Value recv = ev.eval(call_expr.args.at(0), env);
  auto target = std::get_if<ObjRef>(&recv);
  if (!target) throw EvalError(ErrorKind::TypeError, "trigger receiver is not an object", call_expr.loc);
  std::vector<Value> args;
  for (std::size_t i = 1; i < call_expr.args.size(); ++i) args.push_back(ev.eval(call_expr.args[i], env));
  return call(std::nullopt, *target, call_expr.name, std::move(args), call_expr.loc);
}

std::optional<Value> Interpreter::call(std::optional<ObjRef> caller, ObjRef target,
                                       const std::string& method, std::vector<Value> args,
                                       const SourceLocation& loc) {
  step(loc);
  if (!space_.valid(target))
    throw EvalError(ErrorKind::TypeError, "call on a dangling object reference", loc);
  const std::string cls = space_.at(target).class_name;
  const MethodDef* m = find_method_on_chain(model_, cls, method);
  if (!m)
    throw EvalError(ErrorKind::NoSuchMethod, "class '" + cls + "' has no method '" + method + "'",
                    loc);
  if (stack_.size() >= options_.budget.max_depth)
    throw EvalError(ErrorKind::BudgetExhausted,
                    "call depth limit of " + std::to_string(options_.budget.max_depth) + " reached",
                    loc);

  trace_.push_back({TraceEvent::Call, caller, target, method, args, std::nullopt});

  if (m->is_abstract || !m->body)
    throw EvalError(ErrorKind::AbstractCall, "'" + cls + "." + method + "' is abstract", loc);

  const Statechart* sc = effective_statechart(model_, cls);
  if (sc && sc->is_trigger(method)) {
    bool discarded = false;
    fire_transition(target, *sc, *m, args, loc, discarded);
    if (discarded) {
      trace_.push_back({TraceEvent::Return, caller, target, method, {}, std::nullopt});
      return std::nullopt;
    }
  }

  Frame frame{target, {}};
  frame.env["self"] = target;
  for (std::size_t i = 0; i < m->params.size() && i < args.size(); ++i)
    frame.env[m->params[i].name] = args[i];

  stack_.push_back(target);
  struct Pop {
    std::vector<ObjRef>& s;
    ~Pop() { s.pop_back(); }
  } pop{stack_};
  std::optional<Returned> r = exec_block(*m->body, frame);

  std::optional<Value> value;
  if (m->return_type) {
    if (!r || !r->value)
      throw EvalError(ErrorKind::MissingReturn,
                      "'" + cls + "." + method + "' finished without returning a value", loc);
    value = std::move(r->value);
  }
  trace_.push_back({TraceEvent::Return, caller, target, method, {}, value});
  return value;
}

Value Interpreter::eval(const Expr& e, Frame& frame) {
  OclEvaluator ev(model_, space_, this, options_.budget.max_depth);
  return ev.eval(e, frame.env);
}

std::optional<Interpreter::Returned> Interpreter::exec_block(const Block& block, Frame& frame) {
  for (const auto& s : block)
    if (auto r = exec(s, frame)) return r;
  return std::nullopt;
}

ObjRef Interpreter::create(const std::string& cls, const std::vector<Initializer>& inits,
                           Frame& frame, const SourceLocation& loc) {
  check_instantiable(model_, cls, loc);
  // Evaluate initializers before the object exists so they cannot observe it.
  std::vector<std::pair<std::string, Value>> values;
  for (const auto& init : inits) values.emplace_back(init.name, eval(init.value, frame));
  ObjRef r = space_.create(cls);
  Object& obj = space_.at(r);
  init_attributes(model_, obj);
  std::set<std::string> given;
  for (auto& [name, v] : values) {
    obj.attrs[name] = std::move(v);
    given.insert(name);
  }
  require_attributes(model_, r, obj, given, loc);
  enter_initial_state(model_, obj);
  return r;
}

std::optional<Interpreter::Returned> Interpreter::exec(const Stmt& s, Frame& frame) {
  step(s.loc);
  switch (s.kind) {
    case StmtKind::Assign: {
      const Expr& recv = s.target.args.at(0);
      Value target = eval(recv, frame);
      Value v = eval(s.value, frame);
      auto obj = std::get_if<ObjRef>(&target);
      if (!obj)
        throw EvalError(ErrorKind::TypeError, "assignment target is not an object", s.loc);
      auto& attrs = space_.at(*obj).attrs;
      auto slot = attrs.find(s.target.name);
      if (slot == attrs.end())
        throw EvalError(ErrorKind::TypeError, "no attribute '" + s.target.name + "'", s.loc);
      slot->second = std::move(v);
      return std::nullopt;
    }
    case StmtKind::Bind:
      frame.env[s.name] = eval(s.value, frame);
      return std::nullopt;
    case StmtKind::Call: {
      OclEvaluator ev(model_, space_, this, options_.budget.max_depth);
      ev.eval_call(s.target, frame.env);
      return std::nullopt;
    }
    case StmtKind::Create:
      frame.env[s.name] = create(s.class_name, s.inits, frame, s.loc);
      return std::nullopt;
    case StmtKind::LinkAdd:
    case StmtKind::LinkRemove: {
      Value holder_v = eval(s.target.args.at(0), frame);
      Value partner_v = eval(s.value, frame);
      auto holder = std::get_if<ObjRef>(&holder_v);
      if (!holder) throw EvalError(ErrorKind::TypeError, "link source is not an object", s.loc);
      auto role = find_role(model_, space_.at(*holder).class_name, s.target.name);
      if (!role)
        throw EvalError(ErrorKind::TypeError, "no role '" + s.target.name + "'", s.loc);
      std::vector<ObjRef> partners;
      if (auto p = std::get_if<ObjRef>(&partner_v)) partners.push_back(*p);
      else if (auto set = std::get_if<ObjSet>(&partner_v)) partners = set->items;
      else throw EvalError(ErrorKind::TypeError, "link target is not an object", s.loc);
      for (ObjRef p : partners) {
        Link l = ObjectSpace::make_link(*role, *holder, p);
        if (s.kind == StmtKind::LinkAdd) space_.add_link(l);
        else space_.remove_link(l);
      }
      return std::nullopt;
    }
    case StmtKind::Return: {
      Returned r;
      r.value = eval(s.value, frame);
      return r;
    }
    case StmtKind::If: {
      Value c = eval(s.value, frame);
      auto b = std::get_if<bool>(&c);
      if (!b) throw EvalError(ErrorKind::TypeError, "if condition is not Bool", s.loc);
      // Locals bound inside a branch stay local to it.
      Frame inner = frame;
      return exec_block(*b ? s.body : s.else_body, inner);
    }
    case StmtKind::Foreach: {
      Value coll = eval(s.target, frame);
      std::vector<ObjRef> items;
      if (auto set = std::get_if<ObjSet>(&coll)) items = set->items;
      else if (auto o = std::get_if<ObjRef>(&coll)) items.push_back(*o);
      else throw EvalError(ErrorKind::TypeError, "foreach over a non-collection", s.loc);
      for (ObjRef item : items) {
        Frame inner = frame;
        inner.env[s.name] = item;
        if (auto r = exec_block(s.body, inner)) return r;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

CallOutcome call(const Model& model, const ObjectSpace& space, ObjRef target,
                 const std::string& method, std::vector<Value> args, ExecOptions options) {
  CallOutcome out;
  out.space = space;
  Interpreter interp(model, out.space, options);
  try {
    out.value = interp.call(std::nullopt, target, method, std::move(args));
  } catch (const EvalError& e) {
    out.error = e;
  }
  out.trace = interp.trace();
  return out;
}

}  // namespace agm
