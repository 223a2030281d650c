#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "agm/model.hpp"
#include "agm/ocl.hpp"
#include "agm/space.hpp"
#include "agm/testcase.hpp"

namespace agm {

struct Budget {
  std::size_t max_steps = 100000;
  std::size_t max_depth = 1000;
};

struct TraceEvent {
  enum Kind { Call, Return };
  Kind kind = Call;
  std::optional<ObjRef> caller;  // none: the test driver (TESTER)
  ObjRef callee;
  std::string method;
  std::vector<Value> args;      // Call only
  std::optional<Value> value;   // Return only
  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

std::string format_event(const TraceEvent& e, const ObjectSpace* space = nullptr);

struct ExecOptions {
  Budget budget;
  /// Calls with no enabled transition are discarded instead of raising
  /// no-enabled-transition (only for methods without a return type).
  bool ignore_unexpected_events = false;
  /// Observer called for every fired statechart transition.
  std::function<void(ObjRef, const Transition&)> on_transition;
};

/// Builds the object space described by an object diagram. Objects are created
/// in declaration order (object i of the setup is ObjRef{i}) before any
/// initializer runs, so initializers may refer to objects declared later.
/// Throws EvalError.
ObjectSpace instantiate(const Model& model, const Setup& setup);

/// Setup names bound to their objects.
Env setup_bindings(const Setup& setup);

/// Executes method calls against a space it mutates in place.
class Interpreter : private CallHandler {
 public:
  Interpreter(const Model& model, ObjectSpace& space, ExecOptions options = {})
      : model_(model), space_(space), options_(options) {}

  /// Dispatches `method` on `target`. Returns the value of a method with a
  /// return type. Throws EvalError; the trace keeps everything recorded up to
  /// the failure.
  std::optional<Value> call(std::optional<ObjRef> caller, ObjRef target, const std::string& method,
                            std::vector<Value> args, const SourceLocation& loc = {});

  /// A driver trigger: receiver path and arguments are evaluated left to
  /// right in `env`, then the call is made on behalf of TESTER.
  std::optional<Value> trigger(const Expr& call_expr, const Env& env);

  const Trace& trace() const { return trace_; }
  std::size_t steps() const { return steps_; }

 private:
  struct Frame {
    ObjRef self;
    Env env;
  };
  struct Returned {
    std::optional<Value> value;
  };

  std::optional<Value> invoke(ObjRef target, const std::string& method, std::vector<Value> args,
                              const SourceLocation& loc) override;
  /// Returns engaged when a `return` executed.
  std::optional<Returned> exec_block(const Block& block, Frame& frame);
  std::optional<Returned> exec(const Stmt& s, Frame& frame);
  Value eval(const Expr& e, Frame& frame);
  void step(const SourceLocation& loc);
  void fire_transition(ObjRef target, const Statechart& sc, const MethodDef& m,
                       const std::vector<Value>& args, const SourceLocation& loc, bool& discarded);
  ObjRef create(const std::string& cls, const std::vector<Initializer>& inits, Frame& frame,
                const SourceLocation& loc);

  const Model& model_;
  ObjectSpace& space_;
  ExecOptions options_;
  Trace trace_;
  std::vector<ObjRef> stack_;
  std::size_t steps_ = 0;
};

struct CallOutcome {
  std::optional<Value> value;
  Trace trace;
  ObjectSpace space;
  std::optional<EvalError> error;
};

/// Pure wrapper: runs one call from TESTER on a copy of `space`.
CallOutcome call(const Model& model, const ObjectSpace& space, ObjRef target,
                 const std::string& method, std::vector<Value> args, ExecOptions options = {});

}  // namespace agm
