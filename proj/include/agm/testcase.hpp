#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agm/model.hpp"

namespace agm {

enum class Category { Unit, Integration, Acceptance };
enum class DriverMode { Strict, Loose };

const char* to_string(Category c);
const char* to_string(DriverMode m);
std::optional<Category> parse_category(const std::string& s);

/// Sender name used for messages sent by the test driver itself.
inline constexpr const char* kTester = "TESTER";

// Object diagram used as test data.
struct SetupObject {
  std::string name;
  std::string class_name;
  std::vector<Initializer> inits;
  SourceLocation loc;
  bool operator==(const SetupObject&) const = default;
};

/// `link source.role += target;`
struct SetupLink {
  std::string source;
  std::string role;
  std::string target;
  SourceLocation loc;
  bool operator==(const SetupLink&) const = default;
};

struct Setup {
  std::vector<SetupObject> objects;
  std::vector<SetupLink> links;
  bool operator==(const Setup&) const = default;

  const SetupObject* find(const std::string& name) const;
};

enum class DriverKind { Trigger, Expect, Check };

/// One line of the sequence-diagram driver.
///
/// Trigger: `expr` is a Call node whose receiver is a navigation path.
/// Expect:  `sender -> receiver : method(args)`; an empty argument list leaves
///          the arguments unconstrained.
/// Check:   `expr` is an OCL checkpoint.
struct DriverItem {
  DriverKind kind = DriverKind::Check;
  Expr expr;
  std::string sender;
  std::string receiver;
  std::string method;
  std::vector<Expr> args;
  SourceLocation loc;
  /// Emitted as a `//` line before the item by the printer; never parsed.
  std::string note;

  friend bool operator==(const DriverItem& a, const DriverItem& b) {
    return a.kind == b.kind && a.expr == b.expr && a.sender == b.sender &&
           a.receiver == b.receiver && a.method == b.method && a.args == b.args;
  }
};

struct PatternObject {
  std::string name;
  std::string class_name;
  std::vector<Initializer> constraints;
  SourceLocation loc;
  bool operator==(const PatternObject&) const = default;
};

/// `link source.role -> target;` inside a pattern.
struct PatternLink {
  std::string source;
  std::string role;
  std::string target;
  SourceLocation loc;
  bool operator==(const PatternLink&) const = default;
};

struct ObjectPattern {
  std::vector<PatternObject> objects;
  std::vector<PatternLink> links;
  bool operator==(const ObjectPattern&) const = default;
};

struct TestCase {
  std::string name;
  Category category = Category::Unit;
  Setup setup;
  std::optional<DriverMode> mode;
  std::vector<DriverItem> driver;
  std::optional<ObjectPattern> pattern;
  std::vector<Expr> assertions;
  SourceLocation loc;

  bool operator==(const TestCase&) const = default;

  /// Explicit mode, else loose for acceptance tests and strict otherwise.
  DriverMode effective_mode() const;
};

struct TestSuite {
  std::vector<TestCase> tests;
  bool operator==(const TestSuite&) const = default;
};

// ---------------------------------------------------------------------------
// Refactoring script steps.

struct PullUpAttribute {
  std::string subclass;
  std::string attribute;
  std::string target;
  Expr default_value;  // literal
  bool merge = false;  // also absorb same-named declarations in sibling subtrees
  SourceLocation loc;
  bool operator==(const PullUpAttribute&) const = default;
};

enum class PullUpVariant { Override, AbstractSignature };

struct PullUpMethod {
  std::string subclass;
  std::string method;
  std::string target;
  PullUpVariant variant = PullUpVariant::Override;
  SourceLocation loc;
  bool operator==(const PullUpMethod&) const = default;
};

struct RenameAttribute {
  std::string class_name;
  std::string old_name;
  std::string new_name;
  SourceLocation loc;
  bool operator==(const RenameAttribute&) const = default;
};

struct RenameMethod {
  std::string class_name;
  std::string old_name;
  std::string new_name;
  SourceLocation loc;
  bool operator==(const RenameMethod&) const = default;
};

struct RenameClass {
  std::string old_name;
  std::string new_name;
  SourceLocation loc;
  bool operator==(const RenameClass&) const = default;
};

using Refactoring =
    std::variant<PullUpAttribute, PullUpMethod, RenameAttribute, RenameMethod, RenameClass>;

const char* kind_name(const Refactoring& r);

}  // namespace agm
