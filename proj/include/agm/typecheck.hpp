#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agm/model.hpp"

namespace agm {

/// Static type of an expression.
struct Type {
  enum Kind { Int, Bool, String, Object, Set, Void, Error };
  Kind kind = Error;
  std::string cls;  // Object and Set only

  static Type of(const TypeRef& ref);
  static Type object(std::string c) { return {Object, std::move(c)}; }
  static Type set(std::string c) { return {Set, std::move(c)}; }
  bool operator==(const Type&) const = default;
  std::string str() const;
};

struct TypeIssue {
  std::string code;
  std::string message;
  SourceLocation loc;
};

/// Variables visible to an expression. `self_class` is empty outside methods,
/// guards and invariants.
struct Scope {
  std::string self_class;
  std::map<std::string, Type> vars;
};

enum class EvalContext {
  Query,   // OCL: calls must target side-effect-free query methods
  Action,  // method bodies: any call allowed
};

enum class MemberKind { Attribute, Role, Method };

/// Reports every member reference together with the static class of its
/// receiver. Used for renaming and lint rules.
using MemberHook = std::function<void(const Expr& node, const std::string& receiver_class,
                                      MemberKind kind)>;

class TypeChecker {
 public:
  TypeChecker(const Model& model, std::vector<TypeIssue>& issues) : model_(model), issues_(issues) {}

  void set_member_hook(MemberHook hook) { hook_ = std::move(hook); }

  Type check_expr(const Expr& e, const Scope& scope, EvalContext ctx);
  /// Checks that `e` has type Bool.
  void check_condition(const Expr& e, const Scope& scope, EvalContext ctx, const char* what);
  void check_method(const ClassDef& owner, const MethodDef& m);
  void check_block(const Block& block, Scope& scope, const MethodDef& m, EvalContext ctx);

  /// `from` can be stored where `to` is expected.
  bool assignable(const Type& from, const Type& to) const;

  /// A call to `method` on static class `cls` may appear in OCL: every
  /// definition reachable by dispatch is abstract or a single `return`.
  bool is_query_call(const std::string& cls, const std::string& method) const;

 private:
  Type error(const std::string& code, const std::string& msg, const SourceLocation& loc);
  void check_stmt(const Stmt& s, Scope& scope, const MethodDef& m, EvalContext ctx);
  Type check_call(const Expr& e, const Scope& scope, EvalContext ctx);
  /// Object and set types naming an undeclared class are reported elsewhere.
  bool known(const Type& t) const {
    return (t.kind != Type::Object && t.kind != Type::Set) || model_.find_class(t.cls);
  }

  const Model& model_;
  std::vector<TypeIssue>& issues_;
  MemberHook hook_;
};

}  // namespace agm
