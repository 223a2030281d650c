#include <sstream>

#include "agm/syntax.hpp"

namespace agm {

namespace {

constexpr int kPrecImplies = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecEquality = 4;
constexpr int kPrecRelational = 5;
constexpr int kPrecAdditive = 6;
constexpr int kPrecMultiplicative = 7;
constexpr int kPrecUnary = 8;
constexpr int kPrecPostfix = 9;

int binary_precedence(Op op) {
  switch (op) {
    case Op::Implies: return kPrecImplies;
    case Op::Or: return kPrecOr;
    case Op::And: return kPrecAnd;
    case Op::Eq:
    case Op::Ne: return kPrecEquality;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return kPrecRelational;
    case Op::Add:
    case Op::Sub: return kPrecAdditive;
    case Op::Mul:
    case Op::Div: return kPrecMultiplicative;
    default: return kPrecUnary;
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

struct Printed {
  std::string text;
  int prec;
};

Printed print(const Expr& e);

std::string print_at(const Expr& e, int min_prec) {
  Printed p = print(e);
  if (p.prec < min_prec) return "(" + p.text + ")";
  return p.text;
}

std::string print_list(const std::vector<Expr>& args, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < args.size(); ++i) {
    if (i > from) out += ", ";
    out += print_at(args[i], 0);
  }
  return out;
}

Printed print(const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit: return {std::to_string(e.int_value), kPrecPostfix};
    case ExprKind::BoolLit: return {e.bool_value ? "true" : "false", kPrecPostfix};
    case ExprKind::StringLit: return {quote(e.text), kPrecPostfix};
    case ExprKind::Var: return {e.name, kPrecPostfix};
    case ExprKind::Self: return {"self", kPrecPostfix};
    case ExprKind::Nav:
      return {print_at(e.args[0], kPrecPostfix) + "." + e.name, kPrecPostfix};
    case ExprKind::Call:
      return {print_at(e.args[0], kPrecPostfix) + "." + e.name + "(" + print_list(e.args, 1) + ")",
              kPrecPostfix};
    case ExprKind::InState:
      return {print_at(e.args[0], kPrecPostfix) + ".oclInState(" + e.name + ")", kPrecPostfix};
    case ExprKind::AllInstances: return {e.name + ".allInstances()", kPrecPostfix};
    case ExprKind::CollOp: {
      std::string out = print_at(e.args[0], kPrecPostfix) + "->" + e.name + "(";
      if (is_iterator_op(e.name))
        out += e.iter + " | " + print_at(e.args[1], 0);
      else if (e.args.size() > 1)
        out += print_at(e.args[1], 0);
      return {out + ")", kPrecPostfix};
    }
    case ExprKind::Unary: {
      std::string operand = print_at(e.args[0], kPrecUnary);
      if (e.op == Op::Not) return {"not " + operand, kPrecUnary};
      return {(operand.front() == '-' ? "- " : "-") + operand, kPrecUnary};
    }
    case ExprKind::Binary: {
      int p = binary_precedence(e.op);
      bool chainable = p != kPrecEquality && p != kPrecRelational;
      std::string lhs = print_at(e.args[0], chainable ? p : p + 1);
      std::string rhs = print_at(e.args[1], p + 1);
      return {lhs + " " + op_symbol(e.op) + " " + rhs, p};
    }
  }
  return {"?", kPrecPostfix};
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

std::string print_inits(const std::vector<Initializer>& inits) {
  std::string out = "{";
  for (std::size_t i = 0; i < inits.size(); ++i) {
    if (i) out += ", ";
    out += inits[i].name + " = " + print_expr(inits[i].value);
  }
  return out + "}";
}

void print_block(std::ostream& os, const Block& block, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  os << pad(indent);
  switch (s.kind) {
    case StmtKind::Assign:
      os << print_expr(s.target) << " = " << print_expr(s.value) << ";\n";
      break;
    case StmtKind::Bind:
      os << s.name << " = " << print_expr(s.value) << ";\n";
      break;
    case StmtKind::Call:
      os << print_expr(s.target) << ";\n";
      break;
    case StmtKind::Create:
      os << s.name << " = new " << s.class_name << print_inits(s.inits) << ";\n";
      break;
    case StmtKind::LinkAdd:
    case StmtKind::LinkRemove:
      os << print_expr(s.target) << (s.kind == StmtKind::LinkAdd ? " += " : " -= ")
         << print_expr(s.value) << ";\n";
      break;
    case StmtKind::Return:
      os << "return " << print_expr(s.value) << ";\n";
      break;
    case StmtKind::If:
      os << "if (" << print_expr(s.value) << ") ";
      print_block(os, s.body, indent);
      if (s.has_else) {
        os << " else ";
        print_block(os, s.else_body, indent);
      }
      os << "\n";
      break;
    case StmtKind::Foreach:
      os << "foreach " << s.name << " in " << print_expr(s.target) << " ";
      print_block(os, s.body, indent);
      os << "\n";
      break;
  }
}

/// Prints `{...}` without a trailing newline; the opening brace continues the
/// current line.
void print_block(std::ostream& os, const Block& block, int indent) {
  if (block.empty()) {
    os << "{}";
    return;
  }
  os << "{\n";
  for (const auto& s : block) print_stmt(os, s, indent + 1);
  os << pad(indent) << "}";
}

void print_method(std::ostream& os, const MethodDef& m) {
  os << pad(1);
  if (m.published) os << "published ";
  if (m.is_abstract) os << "abstract ";
  os << "method " << m.name << "(";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    os << m.params[i].name << ": " << m.params[i].type.name;
  }
  os << ")";
  if (m.return_type) os << ": " << m.return_type->name;
  if (m.body) {
    os << " ";
    print_block(os, *m.body, 1);
  }
  os << "\n";
}

void print_statechart(std::ostream& os, const Statechart& sc) {
  os << pad(1) << "statechart {\n";
  os << pad(2) << "initial " << sc.initial << ";\n";
  for (const auto& s : sc.states) os << pad(2) << "state " << s << ";\n";
  for (const auto& t : sc.transitions) {
    os << pad(2) << t.source << " -> " << t.target << " on " << t.trigger;
    if (t.guard) os << " [" << print_expr(*t.guard) << "]";
    os << ";\n";
  }
  os << pad(1) << "}\n";
}

void print_class(std::ostream& os, const ClassDef& c) {
  os << "class " << c.name;
  if (c.superclass) os << " extends " << *c.superclass;
  if (c.published) os << " published";
  if (c.attributes.empty() && c.methods.empty() && !c.statechart) {
    os << " {}\n";
    return;
  }
  os << " {\n";
  for (const auto& a : c.attributes) os << pad(1) << "attr " << a.name << ": " << a.type.name << "\n";
  for (const auto& m : c.methods) print_method(os, m);
  if (c.statechart) print_statechart(os, *c.statechart);
  os << "}\n";
}

std::string print_literal(const Expr& e) {
  if (e.kind == ExprKind::IntLit) return std::to_string(e.int_value);
  return print_expr(e);
}

}  // namespace

std::string print_expr(const Expr& expr) { return print(expr).text; }

std::string print_type(const TypeRef& t) { return t.name; }

std::string print_model(const Model& model) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << "\n";
    first = false;
  };
  for (const auto& c : model.classes) {
    sep();
    print_class(os, c);
  }
  for (const auto& a : model.associations) {
    sep();
    os << "assoc " << a.name << " " << a.end_a.class_name << "." << a.end_a.role << " "
       << to_string(a.end_a.multiplicity) << " -- " << to_string(a.end_b.multiplicity) << " "
       << a.end_b.class_name << "." << a.end_b.role << "\n";
  }
  for (const auto& inv : model.invariants) {
    sep();
    os << "invariant " << inv.name << " context " << inv.context << ": " << print_expr(inv.expr)
       << "\n";
  }
  std::string out = os.str();
  return out.empty() ? "\n" : out;
}

std::string print_tests(const TestSuite& suite) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : suite.tests) {
    if (!first) os << "\n";
    first = false;
    os << "test " << to_string(t.category) << " " << t.name << " {\n";

    if (t.setup.objects.empty() && t.setup.links.empty()) {
      os << pad(1) << "setup {}\n";
    } else {
      os << pad(1) << "setup {\n";
      for (const auto& o : t.setup.objects)
        os << pad(2) << o.name << " = new " << o.class_name << print_inits(o.inits) << ";\n";
      for (const auto& l : t.setup.links)
        os << pad(2) << "link " << l.source << "." << l.role << " += " << l.target << ";\n";
      os << pad(1) << "}\n";
    }

    os << pad(1) << "driver";
    if (t.mode) os << " " << to_string(*t.mode);
    if (t.driver.empty()) {
      os << " {}\n";
    } else {
      os << " {\n";
      for (const auto& d : t.driver) {
        if (!d.note.empty()) os << pad(2) << "// " << d.note << "\n";
        os << pad(2);
        switch (d.kind) {
          case DriverKind::Trigger: os << print_expr(d.expr); break;
          case DriverKind::Check: os << "check " << print_expr(d.expr); break;
          case DriverKind::Expect:
            os << "expect " << d.sender << " -> " << d.receiver << " : " << d.method << "(";
            for (std::size_t i = 0; i < d.args.size(); ++i) {
              if (i) os << ", ";
              os << print_expr(d.args[i]);
            }
            os << ")";
            break;
        }
        os << ";\n";
      }
      os << pad(1) << "}\n";
    }

    if (!t.pattern && t.assertions.empty()) {
      os << pad(1) << "oracle {}\n";
    } else {
      os << pad(1) << "oracle {\n";
      if (t.pattern) {
        if (t.pattern->objects.empty() && t.pattern->links.empty()) {
          os << pad(2) << "pattern {}\n";
        } else {
          os << pad(2) << "pattern {\n";
          for (const auto& po : t.pattern->objects)
            os << pad(3) << po.name << ": " << po.class_name << print_inits(po.constraints) << "\n";
          for (const auto& l : t.pattern->links)
            os << pad(3) << "link " << l.source << "." << l.role << " -> " << l.target << ";\n";
          os << pad(2) << "}\n";
        }
      }
      for (const auto& a : t.assertions) os << pad(2) << "assert " << print_expr(a) << ";\n";
      os << pad(1) << "}\n";
    }
    os << "}\n";
  }
  std::string out = os.str();
  return out.empty() ? "\n" : out;
}

std::string print_refactoring(const Refactoring& step) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PullUpAttribute>) {
          return "pull_up_attr " + r.subclass + "." + r.attribute + " -> " + r.target +
                 " default " + print_literal(r.default_value) + (r.merge ? " merge" : "") + ";";
        } else if constexpr (std::is_same_v<T, PullUpMethod>) {
          return "pull_up_method " + r.subclass + "." + r.method + " -> " + r.target +
                 " variant " +
                 (r.variant == PullUpVariant::Override ? "override" : "abstract") + ";";
        } else if constexpr (std::is_same_v<T, RenameAttribute>) {
          return "rename_attr " + r.class_name + "." + r.old_name + " -> " + r.new_name + ";";
        } else if constexpr (std::is_same_v<T, RenameMethod>) {
          return "rename_method " + r.class_name + "." + r.old_name + " -> " + r.new_name + ";";
        } else {
          return "rename_class " + r.old_name + " -> " + r.new_name + ";";
        }
      },
      step);
}

std::string print_refactorings(const std::vector<Refactoring>& steps) {
  std::string out;
  for (const auto& s : steps) out += print_refactoring(s) + "\n";
  return out.empty() ? "\n" : out;
}

}  // namespace agm
