#include "oracle.hpp"

#include <map>
#include <set>
#include <vector>

namespace agmtest {

using namespace agm;

namespace {

struct Fail {
  std::string kind;
};

/// Plain copy of an object space.
struct World {
  struct Obj {
    std::string cls;
    std::map<std::string, Value> attrs;
    std::optional<std::string> state;
  };
  struct Edge {
    std::string assoc;
    std::uint32_t a, b;
  };
  std::vector<Obj> objs;
  std::vector<Edge> edges;
};

class Brute {
 public:
  Brute(const Model& m, const ObjectSpace& s) : model_(m) {
    for (const auto& o : s.objects()) world_.objs.push_back({o.class_name, o.attrs, o.state});
    for (const auto& l : s.links()) world_.edges.push_back({l.assoc, l.a.id, l.b.id});
  }

  Value eval(const Expr& e, const Env& env, int depth) {
    switch (e.kind) {
      case ExprKind::IntLit: return e.int_value;
      case ExprKind::BoolLit: return e.bool_value;
      case ExprKind::StringLit: return e.text;
      case ExprKind::Self:
      case ExprKind::Var: {
        std::string key = e.kind == ExprKind::Self ? "self" : e.name;
        for (const auto& [k, v] : env)
          if (k == key) return v;
        throw Fail{"unbound-variable"};
      }
      case ExprKind::Nav: return nav(obj(eval(e.args[0], env, depth)), e.name);
      case ExprKind::Unary: {
        Value v = eval(e.args[0], env, depth);
        if (e.op == Op::Not) return !boolean(v);
        return fit(-static_cast<__int128>(integer(v)));
      }
      case ExprKind::Binary: return binary(e, env, depth);
      case ExprKind::CollOp: return coll(e, env, depth);
      case ExprKind::AllInstances: {
        if (!declared(e.name)) throw Fail{"unknown-class"};
        std::vector<ObjRef> out;
        for (std::uint32_t i = 0; i < world_.objs.size(); ++i)
          if (inherits(world_.objs[i].cls, e.name)) out.push_back(ObjRef{i});
        return ObjSet{out};
      }
      case ExprKind::InState: {
        const auto& st = world_.objs[obj(eval(e.args[0], env, depth)).id].state;
        return st && *st == e.name;
      }
      case ExprKind::Call: return call(e, env, depth);
    }
    throw Fail{"type-error"};
  }

 private:
  static bool boolean(const Value& v) {
    if (v.index() != 1) throw Fail{"type-error"};
    return std::get<bool>(v);
  }
  static std::int64_t integer(const Value& v) {
    if (v.index() != 0) throw Fail{"type-error"};
    return std::get<std::int64_t>(v);
  }
  static ObjRef obj(const Value& v) {
    if (v.index() != 3) throw Fail{"type-error"};
    return std::get<ObjRef>(v);
  }
  static std::set<std::uint32_t> members(const Value& v) {
    if (v.index() != 4) throw Fail{"type-error"};
    std::set<std::uint32_t> out;
    for (ObjRef r : std::get<ObjSet>(v).items) out.insert(r.id);
    return out;
  }
  static Value fit(__int128 x) {
    if (x > INT64_MAX || x < INT64_MIN) throw Fail{"integer-overflow"};
    return static_cast<std::int64_t>(x);
  }

  bool declared(const std::string& cls) const {
    for (const auto& c : model_.classes)
      if (c.name == cls) return true;
    return false;
  }

  const ClassDef* cls(const std::string& name) const {
    for (const auto& c : model_.classes)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool inherits(std::string c, const std::string& ancestor) const {
    for (int guard = 0; guard < 64; ++guard) {
      if (c == ancestor) return true;
      const ClassDef* d = cls(c);
      if (!d || !d->superclass) return false;
      c = *d->superclass;
    }
    return false;
  }

  Value nav(ObjRef self, const std::string& member) {
    const auto& o = world_.objs[self.id];
    if (auto it = o.attrs.find(member); it != o.attrs.end()) return it->second;
    for (const auto& as : model_.associations) {
      bool forward = as.end_b.role == member && inherits(o.cls, as.end_a.class_name);
      bool backward = as.end_a.role == member && inherits(o.cls, as.end_b.class_name);
      if (!forward && !backward) continue;
      std::set<std::uint32_t> partners;
      for (const auto& e : world_.edges) {
        if (e.assoc != as.name) continue;
        if (forward && e.a == self.id) partners.insert(e.b);
        if (!forward && e.b == self.id) partners.insert(e.a);
      }
      Multiplicity far = forward ? as.end_b.multiplicity : as.end_a.multiplicity;
      if (far == Multiplicity::Many) {
        std::vector<ObjRef> out;
        for (auto id : partners) out.push_back(ObjRef{id});
        return ObjSet{out};
      }
      if (partners.empty()) throw Fail{"undefined-navigation"};
      if (partners.size() > 1) throw Fail{"multiplicity-violation"};
      return ObjRef{*partners.begin()};
    }
    throw Fail{"type-error"};
  }

  Value binary(const Expr& e, const Env& env, int depth) {
    const Expr& l = e.args[0];
    const Expr& r = e.args[1];
    if (e.op == Op::And) return boolean(eval(l, env, depth)) ? boolean(eval(r, env, depth)) : false;
    if (e.op == Op::Or) return boolean(eval(l, env, depth)) ? true : boolean(eval(r, env, depth));
    if (e.op == Op::Implies)
      return boolean(eval(l, env, depth)) ? boolean(eval(r, env, depth)) : true;
    Value a = eval(l, env, depth);
    Value b = eval(r, env, depth);
    if (e.op == Op::Eq || e.op == Op::Ne) {
      if (a.index() != b.index()) throw Fail{"type-error"};
      bool same = format_value(a) == format_value(b);
      return e.op == Op::Eq ? same : !same;
    }
    __int128 x = integer(a);
    __int128 y = integer(b);
    switch (e.op) {
      case Op::Lt: return x < y;
      case Op::Le: return x <= y;
      case Op::Gt: return x > y;
      case Op::Ge: return x >= y;
      case Op::Add: return fit(x + y);
      case Op::Sub: return fit(x - y);
      case Op::Mul: return fit(x * y);
      case Op::Div:
        if (y == 0) throw Fail{"division-by-zero"};
        return fit(x / y);
      default: throw Fail{"type-error"};
    }
  }

  Value coll(const Expr& e, const Env& env, int depth) {
    std::set<std::uint32_t> in = members(eval(e.args[0], env, depth));
    if (e.name == "size") return static_cast<std::int64_t>(in.size());
    if (e.name == "isEmpty") return in.empty();
    if (e.name == "includes") return in.count(obj(eval(e.args[1], env, depth)).id) > 0;
    // forAll / exists / select: visit every object in the world, keep members.
    std::size_t truths = 0;
    std::vector<ObjRef> kept;
    for (std::uint32_t id = 0; id < world_.objs.size(); ++id) {
      if (!in.count(id)) continue;
      Env inner = env;
      inner[e.iter] = ObjRef{id};
      if (boolean(eval(e.args[1], inner, depth))) {
        ++truths;
        kept.push_back(ObjRef{id});
      }
    }
    if (e.name == "forAll") return truths == in.size();
    if (e.name == "exists") return truths > 0;
    return ObjSet{kept};
  }

  Value call(const Expr& e, const Env& env, int depth) {
    ObjRef target = obj(eval(e.args[0], env, depth));
    std::vector<Value> args;
    for (std::size_t i = 1; i < e.args.size(); ++i) args.push_back(eval(e.args[i], env, depth));
    const MethodDef* m = nullptr;
    for (std::string c = world_.objs[target.id].cls; !m;) {
      const ClassDef* d = cls(c);
      if (!d) break;
      for (const auto& md : d->methods)
        if (md.name == e.name) m = &md;
      if (!d->superclass) break;
      c = *d->superclass;
    }
    if (!m) throw Fail{"no-such-method"};
    if (m->is_abstract || !m->body) throw Fail{"abstract-call"};
    if (m->body->size() != 1 || m->body->front().kind != StmtKind::Return) throw Fail{"type-error"};
    if (depth >= 1000) throw Fail{"budget-exhausted"};
    Env inner{{"self", target}};
    for (std::size_t i = 0; i < m->params.size() && i < args.size(); ++i)
      inner[m->params[i].name] = args[i];
    return eval(m->body->front().value, inner, depth + 1);
  }

  const Model& model_;
  World world_;
};

}  // namespace

OracleOutcome brute_eval(const Model& model, const ObjectSpace& space, const Expr& expr,
                         const Env& env) {
  try {
    Brute b(model, space);
    return {b.eval(expr, env, 0), {}};
  } catch (const Fail& f) {
    return {std::nullopt, f.kind};
  }
}

OracleOutcome library_eval(const Model& model, const ObjectSpace& space, const Expr& expr,
                           const Env& env) {
  try {
    return {eval_ocl(expr, model, space, env), {}};
  } catch (const EvalError& e) {
    return {std::nullopt, to_string(e.kind())};
  }
}

std::string describe(const OracleOutcome& o) {
  return o.value ? format_value(*o.value) : "error " + o.error;
}

}  // namespace agmtest
