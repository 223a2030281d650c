#include "agm/testcase.hpp"

namespace agm {

const char* to_string(Category c) {
  switch (c) {
    case Category::Unit: return "unit";
    case Category::Integration: return "integration";
    case Category::Acceptance: return "acceptance";
  }
  return "unit";
}

const char* to_string(DriverMode m) { return m == DriverMode::Strict ? "strict" : "loose"; }

std::optional<Category> parse_category(const std::string& s) {
  if (s == "unit") return Category::Unit;
  if (s == "integration") return Category::Integration;
  if (s == "acceptance") return Category::Acceptance;
  return std::nullopt;
}

const SetupObject* Setup::find(const std::string& name) const {
  for (const auto& o : objects)
    if (o.name == name) return &o;
  return nullptr;
}

DriverMode TestCase::effective_mode() const {
  if (mode) return *mode;
  return category == Category::Acceptance ? DriverMode::Loose : DriverMode::Strict;
}

const char* kind_name(const Refactoring& r) {
  switch (r.index()) {
    case 0: return "PullUpAttribute";
    case 1: return "PullUpMethod";
    case 2: return "RenameAttribute";
    case 3: return "RenameMethod";
    default: return "RenameClass";
  }
}

}  // namespace agm
