#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/space.hpp"

namespace agm {

/// Everything that can abort evaluation or execution. Distinct from a Bool
/// false result.
enum class ErrorKind {
  UndefinedNavigation,
  DivisionByZero,
  UnboundVariable,
  IntegerOverflow,
  TypeError,
  BudgetExhausted,
  NoSuchMethod,
  AbstractCall,
  NoEnabledTransition,
  NondeterministicStatechart,
  AbstractInstantiation,
  MultiplicityViolation,
  MissingRequiredAttribute,
  MissingReturn,
  UnknownClass,
};

const char* to_string(ErrorKind k);

class EvalError : public std::runtime_error {
 public:
  EvalError(ErrorKind kind, const std::string& message, SourceLocation loc = {})
      : std::runtime_error(message), kind_(kind), loc_(std::move(loc)) {}

  ErrorKind kind() const { return kind_; }
  const SourceLocation& location() const { return loc_; }

 private:
  ErrorKind kind_;
  SourceLocation loc_;
};

/// Variable bindings. `self` is stored under the key "self".
using Env = std::map<std::string, Value>;

/// Receives method calls made while evaluating action-language expressions.
/// OCL evaluation without a handler evaluates query methods purely.
class CallHandler {
 public:
  virtual ~CallHandler() = default;
  virtual std::optional<Value> invoke(ObjRef target, const std::string& method,
                                      std::vector<Value> args, const SourceLocation& loc) = 0;
};

class OclEvaluator {
 public:
  OclEvaluator(const Model& model, const ObjectSpace& space, CallHandler* calls = nullptr,
               std::size_t max_depth = 1000)
      : model_(model), space_(space), calls_(calls), max_depth_(max_depth) {}

  Value eval(const Expr& e, const Env& env);
  bool eval_bool(const Expr& e, const Env& env);
  /// Evaluates a Call node; nullopt for methods without a return type.
  std::optional<Value> eval_call(const Expr& call, const Env& env);

 private:
  std::int64_t as_int(const Value& v, const Expr& at) const;
  bool as_bool(const Value& v, const Expr& at) const;
  ObjRef as_obj(const Value& v, const Expr& at) const;
  const ObjSet& as_set(const Value& v, const Expr& at) const;
  Value eval_binary(const Expr& e, const Env& env);
  Value eval_nav(const Expr& e, const Env& env);
  Value eval_coll(const Expr& e, const Env& env);
  std::optional<Value> call_query(ObjRef target, const std::string& method,
                                  const std::vector<Value>& args, const SourceLocation& loc);

  const Model& model_;
  const ObjectSpace& space_;
  CallHandler* calls_;
  std::size_t max_depth_;
  std::size_t depth_ = 0;
};

/// Pure evaluation of `expr`; throws EvalError.
Value eval_ocl(const Expr& expr, const Model& model, const ObjectSpace& space, const Env& env);

enum class Verdict { Pass, Fail, Error };
const char* to_string(Verdict v);

struct InvariantResult {
  std::string invariant;
  ObjRef object;
  Verdict verdict = Verdict::Pass;
  std::string message;  // error text for Verdict::Error
};

/// Evaluates each invariant with `self` bound to every instance of its context
/// class (subclasses included), in declaration order then object order.
std::vector<InvariantResult> check_invariants(const Model& model, const ObjectSpace& space);

}  // namespace agm
