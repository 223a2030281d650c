#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agm/source.hpp"

namespace agm {

// ---------------------------------------------------------------------------
// Types

/// Reference to an attribute, parameter or return type: one of the primitive
/// names `Int`, `Bool`, `String`, or a declared class name.
struct TypeRef {
  std::string name;

  bool is_primitive() const { return name == "Int" || name == "Bool" || name == "String"; }
  bool operator==(const TypeRef&) const = default;
};

bool is_primitive_type_name(const std::string& name);

// ---------------------------------------------------------------------------
// OCL expressions

enum class ExprKind {
  IntLit,
  BoolLit,
  StringLit,
  Var,           // name
  Self,
  Nav,           // args[0].name  (attribute or role, decided by typing)
  Binary,        // args[0] op args[1]
  Unary,         // op args[0]   (Not, Neg)
  CollOp,        // args[0]->name(...); iterator ops bind `iter` over args[1]
  AllInstances,  // name.allInstances()
  InState,       // args[0].oclInState(name)
  Call,          // args[0].name(args[1..])
};

enum class Op {
  None,
  Add, Sub, Mul, Div,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Implies,
  Not, Neg,
};

const char* op_symbol(Op op);

struct Expr {
  ExprKind kind = ExprKind::BoolLit;
  Op op = Op::None;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string text;  // string literal contents
  std::string name;  // variable, member, collection op, class or state name
  std::string iter;  // iterator variable for forAll/exists/select
  std::vector<Expr> args;
  SourceLocation loc;

  bool operator==(const Expr&) const = default;

  static Expr int_lit(std::int64_t v, SourceLocation loc = {});
  static Expr bool_lit(bool v, SourceLocation loc = {});
  static Expr string_lit(std::string v, SourceLocation loc = {});
  static Expr var(std::string name, SourceLocation loc = {});
  static Expr self(SourceLocation loc = {});
  static Expr nav(Expr receiver, std::string member, SourceLocation loc = {});
  static Expr binary(Op op, Expr lhs, Expr rhs, SourceLocation loc = {});
  static Expr unary(Op op, Expr operand, SourceLocation loc = {});
  static Expr coll(Expr receiver, std::string op, std::vector<Expr> rest = {},
                   std::string iter = {}, SourceLocation loc = {});
  static Expr all_instances(std::string cls, SourceLocation loc = {});
  static Expr in_state(Expr receiver, std::string state, SourceLocation loc = {});
  static Expr call(Expr receiver, std::string method, std::vector<Expr> call_args = {},
                   SourceLocation loc = {});
};

/// Collection operations accepted after `->`.
bool is_collection_op(const std::string& name);
bool is_iterator_op(const std::string& name);

// ---------------------------------------------------------------------------
// Action language

struct Stmt;
using Block = std::vector<Stmt>;

enum class StmtKind {
  Assign,      // target(Nav) = value
  Bind,        // name = value          (single-assignment local)
  Call,        // target(Call);
  Create,      // name = new class_name { inits }
  LinkAdd,     // target(Nav) += value
  LinkRemove,  // target(Nav) -= value
  Return,      // return value
  If,          // if (value) body [else else_body]
  Foreach,     // foreach name in target body
};

struct Initializer {
  std::string name;
  Expr value;
  bool operator==(const Initializer&) const = default;
};

struct Stmt {
  StmtKind kind = StmtKind::Return;
  Expr target;
  Expr value;
  std::string name;
  std::string class_name;
  std::vector<Initializer> inits;
  Block body;
  Block else_body;
  bool has_else = false;
  SourceLocation loc;

  bool operator==(const Stmt&) const = default;
};

// ---------------------------------------------------------------------------
// Declarations

struct AttributeDef {
  std::string name;
  TypeRef type;
  SourceLocation loc;
  bool operator==(const AttributeDef&) const = default;
};

struct Param {
  std::string name;
  TypeRef type;
  bool operator==(const Param&) const = default;
};

struct MethodDef {
  std::string name;
  bool published = false;
  bool is_abstract = false;
  std::vector<Param> params;
  std::optional<TypeRef> return_type;
  std::optional<Block> body;
  SourceLocation loc;

  bool operator==(const MethodDef&) const = default;

  /// Same name, parameter types and return type.
  bool same_signature(const MethodDef& other) const;
  /// A method whose body is exactly one `return` statement.
  bool is_single_return() const;
};

struct Transition {
  std::string source;
  std::string trigger;
  std::optional<Expr> guard;
  std::string target;
  SourceLocation loc;
  bool operator==(const Transition&) const = default;
};

struct Statechart {
  std::string initial;
  std::vector<std::string> states;
  std::vector<Transition> transitions;
  SourceLocation loc;

  bool operator==(const Statechart&) const = default;
  bool has_state(const std::string& s) const;
  bool is_trigger(const std::string& method) const;
};

struct ClassDef {
  std::string name;
  std::optional<std::string> superclass;
  bool published = false;
  std::vector<AttributeDef> attributes;
  std::vector<MethodDef> methods;
  std::optional<Statechart> statechart;
  SourceLocation loc;

  bool operator==(const ClassDef&) const = default;

  const AttributeDef* find_attribute(const std::string& n) const;
  const MethodDef* find_method(const std::string& n) const;
  MethodDef* find_method(const std::string& n);
};

enum class Multiplicity { One, ZeroOrOne, Many };

const char* to_string(Multiplicity m);
bool is_single(Multiplicity m);

struct AssocEnd {
  std::string class_name;
  std::string role;
  Multiplicity multiplicity = Multiplicity::Many;
  bool operator==(const AssocEnd&) const = default;
};

/// `assoc Name A.roleA mA -- mB B.roleB`
///
/// `roleA` names the A objects as reached from a B object and `mA` bounds how
/// many A objects a single B object may be linked to; symmetrically for B.
struct AssocDef {
  std::string name;
  AssocEnd end_a;
  AssocEnd end_b;
  SourceLocation loc;
  bool operator==(const AssocDef&) const = default;
};

struct InvariantDef {
  std::string name;
  std::string context;
  Expr expr;
  SourceLocation loc;
  bool operator==(const InvariantDef&) const = default;
};

/// Classes keep declaration order; lookup is linear which is fine for models
/// of the size this tool handles.
struct Model {
  std::vector<ClassDef> classes;
  std::vector<AssocDef> associations;
  std::vector<InvariantDef> invariants;

  bool operator==(const Model&) const = default;

  const ClassDef* find_class(const std::string& n) const;
  ClassDef* find_class(const std::string& n);
  const AssocDef* find_association(const std::string& n) const;
};

// ---------------------------------------------------------------------------
// Lookup helpers shared by every later stage.

class ModelError : public std::runtime_error {
 public:
  ModelError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Class chain from `cls` up to the root. Stops on a cycle.
std::vector<const ClassDef*> ancestry(const Model& model, const std::string& cls);

/// True when `cls` equals `ancestor` or inherits from it.
bool is_subclass_of(const Model& model, const std::string& cls, const std::string& ancestor);

/// `cls` and every class inheriting from it, in declaration order.
std::vector<std::string> subtree(const Model& model, const std::string& cls);

/// Superclass attributes first, then own. Throws ModelError("unknown-class").
std::vector<AttributeDef> effective_attributes(const Model& model, const std::string& cls);

/// Nearest definition on the chain from `cls` upward.
/// Throws ModelError("unknown-class") or ModelError("no-such-method").
const MethodDef& resolve_method(const Model& model, const std::string& cls,
                                const std::string& method);
const MethodDef* find_method_on_chain(const Model& model, const std::string& cls,
                                      const std::string& method);
/// Class declaring the definition `resolve_method` would return, or null.
const ClassDef* declaring_class(const Model& model, const std::string& cls,
                                const std::string& method);

/// Own statechart, or the nearest inherited one.
const Statechart* effective_statechart(const Model& model, const std::string& cls);

/// Abstract methods visible on `cls` that no class on the chain implements.
std::vector<std::string> unimplemented_abstract_methods(const Model& model,
                                                        const std::string& cls);
bool is_abstract_class(const Model& model, const std::string& cls);

/// A role reachable from objects of `cls` (including inherited ends).
struct RoleInfo {
  const AssocDef* assoc = nullptr;
  bool from_a = false;  // navigating from end A to end B
  const AssocEnd& far() const { return from_a ? assoc->end_b : assoc->end_a; }
  const AssocEnd& near() const { return from_a ? assoc->end_a : assoc->end_b; }
};

std::optional<RoleInfo> find_role(const Model& model, const std::string& cls,
                                  const std::string& role);
std::vector<RoleInfo> roles_of(const Model& model, const std::string& cls);

/// All methods callable on `cls`: nearest definition per name.
std::vector<const MethodDef*> effective_methods(const Model& model, const std::string& cls);

}  // namespace agm
