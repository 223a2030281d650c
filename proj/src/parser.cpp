#include <algorithm>
#include <array>
#include <set>

#include "agm/syntax.hpp"
#include "lexer.hpp"

namespace agm {

namespace {

using detail::Tok;
using detail::Token;

constexpr std::array kKeywords = {
    "class",        "extends",       "published",   "abstract",     "method",
    "attr",         "assoc",         "invariant",   "context",      "statechart",
    "initial",      "state",         "on",          "return",       "new",
    "if",           "else",          "foreach",     "in",           "test",
    "unit",         "integration",   "acceptance",  "setup",        "driver",
    "strict",       "loose",         "expect",      "check",        "oracle",
    "pattern",      "assert",        "link",        "and",          "or",
    "not",          "implies",       "true",        "false",        "self",
    "allInstances", "oclInState",    "TESTER",      "pull_up_attr", "pull_up_method",
    "rename_attr",  "rename_method", "rename_class", "default",     "merge",
    "variant",      "override",
};

struct SyntaxError {
  ParseDiagnostic diag;
};

class Parser {
 public:
  Parser(std::string_view text, std::string file)
      : file_(std::move(file)), toks_(detail::tokenize(text, file_)) {}

  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& expected, const Token* at = nullptr) {
    const Token& t = at ? *at : peek();
    ParseDiagnostic d;
    d.location = t.loc;
    d.code = "syntax";
    d.expected = expected;
    if (t.kind == Tok::Error)
      d.message = t.text;
    else if (t.kind == Tok::End)
      d.message = "unexpected end of input";
    else
      d.message = "unexpected '" + describe(t) + "'";
    throw SyntaxError{std::move(d)};
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::String) return "\"" + t.text + "\"";
    return t.text;
  }

  bool accept_punct(std::string_view p) {
    if (peek().punct(p)) {
      next();
      return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view k) {
    if (peek().keyword(k)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect_punct(std::string_view p) {
    if (!peek().punct(p)) fail("'" + std::string(p) + "'");
    return next();
  }
  const Token& expect_keyword(std::string_view k) {
    if (!peek().keyword(k)) fail("'" + std::string(k) + "'");
    return next();
  }
  std::string expect_ident(const char* what = "identifier") {
    if (peek().kind != Tok::Ident) fail(what);
    return next().text;
  }

  std::size_t position() const { return pos_; }

  /// Skips to the next token satisfying `stop` (or end of input), always
  /// consuming at least one token past `item_start`.
  template <class Pred>
  void recover(std::size_t item_start, Pred stop) {
    if (pos_ == item_start && !at_end()) next();
    while (!at_end() && !stop(peek())) next();
  }

  void report(const SyntaxError& e) { diags_.push_back(e.diag); }
  Diagnostics& diagnostics() { return diags_; }

  // ---- expressions ---------------------------------------------------------

  Expr parse_expr() { return parse_implies(); }

  Expr parse_implies() {
    Expr lhs = parse_or();
    while (peek().keyword("implies")) {
      SourceLocation loc = next().loc;
      lhs = Expr::binary(Op::Implies, std::move(lhs), parse_or(), loc);
    }
    return lhs;
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (peek().keyword("or")) {
      SourceLocation loc = next().loc;
      lhs = Expr::binary(Op::Or, std::move(lhs), parse_and(), loc);
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_equality();
    while (peek().keyword("and")) {
      SourceLocation loc = next().loc;
      lhs = Expr::binary(Op::And, std::move(lhs), parse_equality(), loc);
    }
    return lhs;
  }

  Expr parse_equality() {
    Expr lhs = parse_relational();
    if (peek().punct("==") || peek().punct("!=")) {
      const Token& t = next();
      Op op = t.text == "==" ? Op::Eq : Op::Ne;
      lhs = Expr::binary(op, std::move(lhs), parse_relational(), t.loc);
    }
    return lhs;
  }

  Expr parse_relational() {
    Expr lhs = parse_additive();
    static const std::pair<const char*, Op> ops[] = {
        {"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}};
    for (auto [sym, op] : ops) {
      if (peek().punct(sym)) {
        SourceLocation loc = next().loc;
        return Expr::binary(op, std::move(lhs), parse_additive(), loc);
      }
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (peek().punct("+") || peek().punct("-")) {
      const Token& t = next();
      Op op = t.text == "+" ? Op::Add : Op::Sub;
      lhs = Expr::binary(op, std::move(lhs), parse_multiplicative(), t.loc);
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (peek().punct("*") || peek().punct("/")) {
      const Token& t = next();
      Op op = t.text == "*" ? Op::Mul : Op::Div;
      lhs = Expr::binary(op, std::move(lhs), parse_unary(), t.loc);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().keyword("not")) {
      SourceLocation loc = next().loc;
      return Expr::unary(Op::Not, parse_unary(), loc);
    }
    if (peek().punct("-")) {
      SourceLocation loc = next().loc;
      return Expr::unary(Op::Neg, parse_unary(), loc);
    }
    return parse_postfix();
  }

  std::vector<Expr> parse_args() {
    std::vector<Expr> args;
    expect_punct("(");
    if (!peek().punct(")")) {
      args.push_back(parse_expr());
      while (accept_punct(",")) args.push_back(parse_expr());
    }
    expect_punct(")");
    return args;
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    for (;;) {
      if (peek().punct(".")) {
        SourceLocation loc = next().loc;
        if (accept_keyword("oclInState")) {
          expect_punct("(");
          std::string state = expect_ident("state name");
          expect_punct(")");
          e = Expr::in_state(std::move(e), std::move(state), loc);
          continue;
        }
        std::string member = expect_ident("member name");
        if (peek().punct("(")) {
          e = Expr::call(std::move(e), std::move(member), parse_args(), loc);
        } else {
          e = Expr::nav(std::move(e), std::move(member), loc);
        }
      } else if (peek().punct("->")) {
        SourceLocation loc = next().loc;
        const Token& opTok = peek();
        std::string op = expect_ident("collection operation");
        if (!is_collection_op(op)) fail("size, isEmpty, includes, forAll, exists or select", &opTok);
        expect_punct("(");
        if (is_iterator_op(op)) {
          std::string iter = expect_ident("iterator variable");
          expect_punct("|");
          Expr body = parse_expr();
          expect_punct(")");
          e = Expr::coll(std::move(e), op, {std::move(body)}, std::move(iter), loc);
        } else if (op == "includes") {
          Expr arg = parse_expr();
          expect_punct(")");
          e = Expr::coll(std::move(e), op, {std::move(arg)}, {}, loc);
        } else {
          expect_punct(")");
          e = Expr::coll(std::move(e), op, {}, {}, loc);
        }
      } else {
        return e;
      }
    }
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
        next();
        return Expr::int_lit(t.int_value, t.loc);
      case Tok::String:
        next();
        return Expr::string_lit(t.text, t.loc);
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") {
          next();
          return Expr::bool_lit(t.text == "true", t.loc);
        }
        if (t.text == "self") {
          next();
          return Expr::self(t.loc);
        }
        break;
      case Tok::Ident:
        if (peek(1).punct(".") && peek(2).keyword("allInstances")) {
          next();
          next();
          next();
          expect_punct("(");
          expect_punct(")");
          return Expr::all_instances(t.text, t.loc);
        }
        next();
        return Expr::var(t.text, t.loc);
      case Tok::Punct:
        if (t.text == "(") {
          next();
          Expr e = parse_expr();
          expect_punct(")");
          return e;
        }
        break;
      default:
        break;
    }
    fail("expression");
  }

  // ---- shared pieces -------------------------------------------------------

  TypeRef parse_type() { return TypeRef{expect_ident("type name")}; }

  std::vector<Initializer> parse_assigns() {
    std::vector<Initializer> out;
    expect_punct("{");
    if (!peek().punct("}")) {
      do {
        Initializer init;
        init.name = expect_ident("attribute name");
        expect_punct("=");
        init.value = parse_expr();
        out.push_back(std::move(init));
      } while (accept_punct(","));
    }
    expect_punct("}");
    return out;
  }

  /// Literal constant: integer (optionally negative), string, or boolean.
  Expr parse_literal() {
    const Token& t = peek();
    if (t.punct("-") && peek(1).kind == Tok::Int) {
      next();
      const Token& n = next();
      return Expr::int_lit(-n.int_value, t.loc);
    }
    if (t.kind == Tok::Int) {
      next();
      return Expr::int_lit(t.int_value, t.loc);
    }
    if (t.kind == Tok::String) {
      next();
      return Expr::string_lit(t.text, t.loc);
    }
    if (t.keyword("true") || t.keyword("false")) {
      next();
      return Expr::bool_lit(t.text == "true", t.loc);
    }
    fail("literal value");
  }

  // ---- model ---------------------------------------------------------------

  Model parse_model_file() {
    Model model;
    auto top = [](const Token& t) {
      return t.keyword("class") || t.keyword("assoc") || t.keyword("invariant");
    };
    while (!at_end()) {
      std::size_t start = pos_;
      try {
        if (peek().keyword("class")) {
          model.classes.push_back(parse_class());
        } else if (peek().keyword("assoc")) {
          model.associations.push_back(parse_assoc());
        } else if (peek().keyword("invariant")) {
          model.invariants.push_back(parse_invariant());
        } else {
          fail("'class', 'assoc' or 'invariant'");
        }
      } catch (const SyntaxError& e) {
        report(e);
        recover(start, top);
      }
    }
    return model;
  }

  ClassDef parse_class() {
    ClassDef c;
    c.loc = expect_keyword("class").loc;
    c.name = expect_ident("class name");
    if (accept_keyword("extends")) c.superclass = expect_ident("superclass name");
    if (accept_keyword("published")) c.published = true;
    expect_punct("{");
    while (!peek().punct("}")) {
      if (peek().keyword("attr")) {
        AttributeDef a;
        a.loc = next().loc;
        a.name = expect_ident("attribute name");
        expect_punct(":");
        a.type = parse_type();
        c.attributes.push_back(std::move(a));
      } else if (peek().keyword("statechart")) {
        const Token& at = peek();
        Statechart sc = parse_statechart();
        if (c.statechart) fail("at most one statechart per class", &at);
        c.statechart = std::move(sc);
      } else if (peek().keyword("published") || peek().keyword("abstract") ||
                 peek().keyword("method")) {
        c.methods.push_back(parse_method());
      } else {
        fail("'attr', 'method', 'statechart' or '}'");
      }
    }
    expect_punct("}");
    return c;
  }

  MethodDef parse_method() {
    MethodDef m;
    m.loc = peek().loc;
    if (accept_keyword("published")) m.published = true;
    if (accept_keyword("abstract")) m.is_abstract = true;
    expect_keyword("method");
    m.name = expect_ident("method name");
    expect_punct("(");
    if (!peek().punct(")")) {
      do {
        Param p;
        p.name = expect_ident("parameter name");
        expect_punct(":");
        p.type = parse_type();
        m.params.push_back(std::move(p));
      } while (accept_punct(","));
    }
    expect_punct(")");
    if (accept_punct(":")) m.return_type = parse_type();
    if (peek().punct("{")) m.body = parse_block();
    return m;
  }

  Statechart parse_statechart() {
    Statechart sc;
    sc.loc = expect_keyword("statechart").loc;
    expect_punct("{");
    expect_keyword("initial");
    sc.initial = expect_ident("state name");
    expect_punct(";");
    do {
      expect_keyword("state");
      sc.states.push_back(expect_ident("state name"));
      expect_punct(";");
    } while (peek().keyword("state"));
    while (peek().kind == Tok::Ident) {
      Transition t;
      t.loc = peek().loc;
      t.source = next().text;
      expect_punct("->");
      t.target = expect_ident("target state");
      expect_keyword("on");
      t.trigger = expect_ident("trigger method");
      if (accept_punct("[")) {
        t.guard = parse_expr();
        expect_punct("]");
      }
      expect_punct(";");
      sc.transitions.push_back(std::move(t));
    }
    expect_punct("}");
    return sc;
  }

  Multiplicity parse_multiplicity() {
    if (accept_punct("*")) return Multiplicity::Many;
    const Token& t = peek();
    if (t.kind == Tok::Int && t.int_value == 1) {
      next();
      return Multiplicity::One;
    }
    if (t.kind == Tok::Int && t.int_value == 0 && peek(1).punct("..") &&
        peek(2).kind == Tok::Int && peek(2).int_value == 1) {
      next();
      next();
      next();
      return Multiplicity::ZeroOrOne;
    }
    fail("multiplicity '1', '0..1' or '*'");
  }

  AssocDef parse_assoc() {
    AssocDef a;
    a.loc = expect_keyword("assoc").loc;
    a.name = expect_ident("association name");
    a.end_a.class_name = expect_ident("class name");
    expect_punct(".");
    a.end_a.role = expect_ident("role name");
    a.end_a.multiplicity = parse_multiplicity();
    expect_punct("--");
    a.end_b.multiplicity = parse_multiplicity();
    a.end_b.class_name = expect_ident("class name");
    expect_punct(".");
    a.end_b.role = expect_ident("role name");
    return a;
  }

  InvariantDef parse_invariant() {
    InvariantDef inv;
    inv.loc = expect_keyword("invariant").loc;
    inv.name = expect_ident("invariant name");
    expect_keyword("context");
    inv.context = expect_ident("class name");
    expect_punct(":");
    inv.expr = parse_expr();
    return inv;
  }

  // ---- action language -----------------------------------------------------

  Block parse_block() {
    Block b;
    expect_punct("{");
    while (!peek().punct("}")) b.push_back(parse_stmt());
    expect_punct("}");
    return b;
  }

  Stmt parse_stmt() {
    Stmt s;
    s.loc = peek().loc;
    if (accept_keyword("return")) {
      s.kind = StmtKind::Return;
      s.value = parse_expr();
      expect_punct(";");
      return s;
    }
    if (accept_keyword("if")) {
      s.kind = StmtKind::If;
      expect_punct("(");
      s.value = parse_expr();
      expect_punct(")");
      s.body = parse_block();
      if (accept_keyword("else")) {
        s.has_else = true;
        s.else_body = parse_block();
      }
      return s;
    }
    if (accept_keyword("foreach")) {
      s.kind = StmtKind::Foreach;
      s.name = expect_ident("loop variable");
      expect_keyword("in");
      s.target = parse_postfix();
      s.body = parse_block();
      return s;
    }

    const Token& start = peek();
    Expr lhs = parse_postfix();
    if (peek().punct("=")) {
      next();
      if (peek().keyword("new")) {
        if (lhs.kind != ExprKind::Var) fail("local variable before '= new'", &start);
        next();
        s.kind = StmtKind::Create;
        s.name = lhs.name;
        s.class_name = expect_ident("class name");
        s.inits = parse_assigns();
        expect_punct(";");
        return s;
      }
      if (lhs.kind == ExprKind::Var) {
        s.kind = StmtKind::Bind;
        s.name = lhs.name;
      } else if (lhs.kind == ExprKind::Nav) {
        s.kind = StmtKind::Assign;
        s.target = std::move(lhs);
      } else {
        fail("assignable path", &start);
      }
      s.value = parse_expr();
      expect_punct(";");
      return s;
    }
    if (peek().punct("+=") || peek().punct("-=")) {
      bool add = next().text == "+=";
      if (lhs.kind != ExprKind::Nav) fail("role path before link operator", &start);
      s.kind = add ? StmtKind::LinkAdd : StmtKind::LinkRemove;
      s.target = std::move(lhs);
      s.value = parse_expr();
      expect_punct(";");
      return s;
    }
    if (lhs.kind != ExprKind::Call) fail("'=', '+=', '-=' or a method call", &start);
    s.kind = StmtKind::Call;
    s.target = std::move(lhs);
    expect_punct(";");
    return s;
  }

  // ---- tests ---------------------------------------------------------------

  TestSuite parse_tests_file() {
    TestSuite suite;
    while (!at_end()) {
      std::size_t start = pos_;
      try {
        suite.tests.push_back(parse_test());
      } catch (const SyntaxError& e) {
        report(e);
        recover(start, [](const Token& t) { return t.keyword("test"); });
      }
    }
    return suite;
  }

  static bool is_path(const Expr& e) {
    if (e.kind == ExprKind::Var) return true;
    if (e.kind == ExprKind::Nav) return is_path(e.args[0]);
    return false;
  }

  TestCase parse_test() {
    TestCase tc;
    tc.loc = expect_keyword("test").loc;
    if (accept_keyword("unit"))
      tc.category = Category::Unit;
    else if (accept_keyword("integration"))
      tc.category = Category::Integration;
    else if (accept_keyword("acceptance"))
      tc.category = Category::Acceptance;
    else
      fail("'unit', 'integration' or 'acceptance'");
    tc.name = expect_ident("test name");
    expect_punct("{");

    expect_keyword("setup");
    expect_punct("{");
    while (!peek().punct("}")) {
      if (peek().keyword("link")) {
        SetupLink l;
        l.loc = next().loc;
        l.source = expect_ident("object name");
        expect_punct(".");
        l.role = expect_ident("role name");
        expect_punct("+=");
        l.target = expect_ident("object name");
        expect_punct(";");
        tc.setup.links.push_back(std::move(l));
      } else {
        SetupObject o;
        o.loc = peek().loc;
        o.name = expect_ident("object name or 'link'");
        expect_punct("=");
        expect_keyword("new");
        o.class_name = expect_ident("class name");
        o.inits = parse_assigns();
        expect_punct(";");
        tc.setup.objects.push_back(std::move(o));
      }
    }
    expect_punct("}");

    expect_keyword("driver");
    if (accept_keyword("strict"))
      tc.mode = DriverMode::Strict;
    else if (accept_keyword("loose"))
      tc.mode = DriverMode::Loose;
    expect_punct("{");
    while (!peek().punct("}")) {
      DriverItem item;
      item.loc = peek().loc;
      if (accept_keyword("expect")) {
        item.kind = DriverKind::Expect;
        if (accept_keyword("TESTER"))
          item.sender = kTester;
        else
          item.sender = expect_ident("sender object or TESTER");
        expect_punct("->");
        item.receiver = expect_ident("receiver object");
        expect_punct(":");
        item.method = expect_ident("method name");
        item.args = parse_args();
      } else if (accept_keyword("check")) {
        item.kind = DriverKind::Check;
        item.expr = parse_expr();
      } else {
        const Token& start = peek();
        item.kind = DriverKind::Trigger;
        item.expr = parse_postfix();
        if (item.expr.kind != ExprKind::Call || !is_path(item.expr.args[0]))
          fail("trigger call 'object.method(args)'", &start);
      }
      expect_punct(";");
      tc.driver.push_back(std::move(item));
    }
    expect_punct("}");

    expect_keyword("oracle");
    expect_punct("{");
    if (accept_keyword("pattern")) {
      ObjectPattern pat;
      expect_punct("{");
      while (!peek().punct("}")) {
        if (peek().keyword("link")) {
          PatternLink l;
          l.loc = next().loc;
          l.source = expect_ident("pattern object");
          expect_punct(".");
          l.role = expect_ident("role name");
          expect_punct("->");
          l.target = expect_ident("pattern object");
          expect_punct(";");
          pat.links.push_back(std::move(l));
        } else {
          PatternObject po;
          po.loc = peek().loc;
          po.name = expect_ident("pattern object name or 'link'");
          expect_punct(":");
          po.class_name = expect_ident("class name");
          po.constraints = parse_assigns();
          pat.objects.push_back(std::move(po));
        }
      }
      expect_punct("}");
      tc.pattern = std::move(pat);
    }
    while (accept_keyword("assert")) {
      tc.assertions.push_back(parse_expr());
      expect_punct(";");
    }
    expect_punct("}");
    expect_punct("}");
    return tc;
  }

  // ---- refactoring scripts -------------------------------------------------

  std::vector<Refactoring> parse_script_file() {
    std::vector<Refactoring> steps;
    while (!at_end()) {
      try {
        steps.push_back(parse_step());
      } catch (const SyntaxError& e) {
        report(e);
        // Resume after the next ';'.
        while (!at_end() && !peek().punct(";")) next();
        if (!at_end()) next();
      }
    }
    return steps;
  }

  Refactoring parse_step() {
    const Token& t = peek();
    if (accept_keyword("pull_up_attr")) {
      PullUpAttribute r;
      r.loc = t.loc;
      r.subclass = expect_ident("class name");
      expect_punct(".");
      r.attribute = expect_ident("attribute name");
      expect_punct("->");
      r.target = expect_ident("superclass name");
      expect_keyword("default");
      r.default_value = parse_literal();
      if (accept_keyword("merge")) r.merge = true;
      expect_punct(";");
      return r;
    }
    if (accept_keyword("pull_up_method")) {
      PullUpMethod r;
      r.loc = t.loc;
      r.subclass = expect_ident("class name");
      expect_punct(".");
      r.method = expect_ident("method name");
      expect_punct("->");
      r.target = expect_ident("superclass name");
      expect_keyword("variant");
      if (accept_keyword("override"))
        r.variant = PullUpVariant::Override;
      else if (accept_keyword("abstract"))
        r.variant = PullUpVariant::AbstractSignature;
      else
        fail("'override' or 'abstract'");
      expect_punct(";");
      return r;
    }
    if (peek().keyword("rename_attr") || peek().keyword("rename_method")) {
      bool attr = next().text == "rename_attr";
      std::string cls = expect_ident("class name");
      expect_punct(".");
      std::string old_name = expect_ident(attr ? "attribute name" : "method name");
      expect_punct("->");
      std::string new_name = expect_ident("new name");
      expect_punct(";");
      if (attr) return RenameAttribute{cls, old_name, new_name, t.loc};
      return RenameMethod{cls, old_name, new_name, t.loc};
    }
    if (accept_keyword("rename_class")) {
      RenameClass r;
      r.loc = t.loc;
      r.old_name = expect_ident("class name");
      expect_punct("->");
      r.new_name = expect_ident("new class name");
      expect_punct(";");
      return r;
    }
    fail("refactoring step");
  }

 private:
  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Diagnostics diags_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

ModelParse parse_model(std::string_view text, const std::string& file) {
  Parser p(text, file);
  ModelParse out;
  out.model = p.parse_model_file();
  out.diagnostics = std::move(p.diagnostics());
  return out;
}

TestsParse parse_tests_syntax(std::string_view text, const std::string& file) {
  Parser p(text, file);
  TestsParse out;
  out.suite = p.parse_tests_file();
  out.diagnostics = std::move(p.diagnostics());
  return out;
}

TestsParse parse_tests(std::string_view text, const Model& model, const std::string& file) {
  TestsParse out = parse_tests_syntax(text, file);
  Diagnostics more = resolve_tests(out.suite, model);
  out.diagnostics.insert(out.diagnostics.end(), more.begin(), more.end());
  return out;
}

ScriptParse parse_refactorings_syntax(std::string_view text, const std::string& file) {
  Parser p(text, file);
  ScriptParse out;
  out.steps = p.parse_script_file();
  out.diagnostics = std::move(p.diagnostics());
  return out;
}

ScriptParse parse_refactorings(std::string_view text, const Model& model,
                               const std::string& file) {
  ScriptParse out = parse_refactorings_syntax(text, file);
  std::set<std::string> classes;
  for (const auto& c : model.classes) classes.insert(c.name);
  auto need = [&](const std::string& cls, const SourceLocation& loc) {
    if (!classes.count(cls))
      out.diagnostics.push_back({loc, "unknown-class", "unknown class '" + cls + "'", {}});
  };
  for (const auto& step : out.steps) {
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, PullUpAttribute>) {
            need(r.subclass, r.loc);
            need(r.target, r.loc);
          } else if constexpr (std::is_same_v<T, PullUpMethod>) {
            need(r.subclass, r.loc);
            need(r.target, r.loc);
          } else if constexpr (std::is_same_v<T, RenameClass>) {
            need(r.old_name, r.loc);
            classes.insert(r.new_name);
          } else {
            need(r.class_name, r.loc);
          }
        },
        step);
  }
  return out;
}

Expr parse_expr(std::string_view text, Diagnostics& diagnostics) {
  Parser p(text, "<expr>");
  try {
    Expr e = p.parse_expr();
    if (!p.at_end()) p.fail("end of expression");
    return e;
  } catch (const SyntaxError& e) {
    diagnostics.push_back(e.diag);
    return Expr::bool_lit(false);
  }
}

}  // namespace agm
