#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "agm/model.hpp"

namespace agm {

/// Handle of an object inside an ObjectSpace (its creation index).
struct ObjRef {
  std::uint32_t id = 0;
  auto operator<=>(const ObjRef&) const = default;
};

/// Unordered, duplicate-free set of objects. Kept sorted by id so equality
/// and iteration order are canonical.
struct ObjSet {
  std::vector<ObjRef> items;

  static ObjSet of(std::vector<ObjRef> refs);
  bool contains(ObjRef r) const;
  bool operator==(const ObjSet&) const = default;
};

using Value = std::variant<std::int64_t, bool, std::string, ObjRef, ObjSet>;

/// Default value for a primitive attribute; nullopt for object types.
std::optional<Value> default_value(const TypeRef& type);

struct Object {
  std::string class_name;
  std::string label;  // setup name, empty for objects created while running
  std::map<std::string, Value> attrs;
  std::optional<std::string> state;
  bool operator==(const Object&) const = default;
};

struct Link {
  std::string assoc;
  ObjRef a;
  ObjRef b;
  auto operator<=>(const Link&) const = default;
  bool operator==(const Link&) const = default;
};

/// The runtime heap: objects with attribute values and links between them.
class ObjectSpace {
 public:
  ObjRef create(std::string class_name, std::string label = {});

  Object& at(ObjRef r) { return objects_.at(r.id); }
  const Object& at(ObjRef r) const { return objects_.at(r.id); }
  bool valid(ObjRef r) const { return r.id < objects_.size(); }
  std::size_t size() const { return objects_.size(); }
  const std::vector<Object>& objects() const { return objects_; }
  const std::set<Link>& links() const { return links_; }

  void add_link(Link l) { links_.insert(std::move(l)); }
  void remove_link(const Link& l) { links_.erase(l); }

  /// Link in the direction given by `role` from `from` to `to`.
  static Link make_link(const RoleInfo& role, ObjRef from, ObjRef to);
  /// Objects reached from `from` through `role`, ascending.
  std::vector<ObjRef> linked(const RoleInfo& role, ObjRef from) const;
  /// Instances of `cls` or any of its subclasses, ascending.
  std::vector<ObjRef> instances_of(const Model& model, const std::string& cls) const;
  std::optional<ObjRef> find_label(const std::string& label) const;

  /// Canonical text form: objects by creation index, attributes by name,
  /// links in lexicographic order.
  std::string serialize() const;

  bool operator==(const ObjectSpace&) const = default;

 private:
  std::vector<Object> objects_;
  std::set<Link> links_;
};

std::string format_value(const Value& v);
const char* value_kind(const Value& v);

/// First upper-bound violation of a `1` or `0..1` association end, if any.
std::optional<std::string> find_multiplicity_violation(const Model& model,
                                                       const ObjectSpace& space);

}  // namespace agm
