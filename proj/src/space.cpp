#include "agm/space.hpp"

#include <algorithm>
#include <sstream>

namespace agm {

ObjSet ObjSet::of(std::vector<ObjRef> refs) {
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  return ObjSet{std::move(refs)};
}

bool ObjSet::contains(ObjRef r) const { return std::binary_search(items.begin(), items.end(), r); }

std::optional<Value> default_value(const TypeRef& type) {
  if (type.name == "Int") return Value{std::int64_t{0}};
  if (type.name == "Bool") return Value{false};
  if (type.name == "String") return Value{std::string{}};
  return std::nullopt;
}

ObjRef ObjectSpace::create(std::string class_name, std::string label) {
  ObjRef r{static_cast<std::uint32_t>(objects_.size())};
  Object o;
  o.class_name = std::move(class_name);
  o.label = std::move(label);
  objects_.push_back(std::move(o));
  return r;
}

Link ObjectSpace::make_link(const RoleInfo& role, ObjRef from, ObjRef to) {
  if (role.from_a) return Link{role.assoc->name, from, to};
  return Link{role.assoc->name, to, from};
}

std::vector<ObjRef> ObjectSpace::linked(const RoleInfo& role, ObjRef from) const {
  std::vector<ObjRef> out;
  const std::string& name = role.assoc->name;
  for (auto it = links_.lower_bound(Link{name, {}, {}}); it != links_.end() && it->assoc == name;
       ++it) {
    if (role.from_a && it->a == from) out.push_back(it->b);
    if (!role.from_a && it->b == from) out.push_back(it->a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ObjRef> ObjectSpace::instances_of(const Model& model, const std::string& cls) const {
  std::vector<ObjRef> out;
  for (std::uint32_t i = 0; i < objects_.size(); ++i)
    if (is_subclass_of(model, objects_[i].class_name, cls)) out.push_back(ObjRef{i});
  return out;
}

std::optional<ObjRef> ObjectSpace::find_label(const std::string& label) const {
  for (std::uint32_t i = 0; i < objects_.size(); ++i)
    if (objects_[i].label == label) return ObjRef{i};
  return std::nullopt;
}

std::string format_value(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      std::string out = "\"";
      for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        out += c;
      }
      return out + "\"";
    }
    std::string operator()(ObjRef r) const { return "#" + std::to_string(r.id); }
    std::string operator()(const ObjSet& s) const {
      std::string out = "{";
      for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ", ";
        out += "#" + std::to_string(s.items[i].id);
      }
      return out + "}";
    }
  };
  return std::visit(Visitor{}, v);
}

const char* value_kind(const Value& v) {
  switch (v.index()) {
    case 0: return "Int";
    case 1: return "Bool";
    case 2: return "String";
    case 3: return "Object";
    default: return "Set";
  }
}

std::string ObjectSpace::serialize() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const Object& o = objects_[i];
    os << "#" << i;
    if (!o.label.empty()) os << " " << o.label;
    os << ": " << o.class_name;
    if (o.state) os << " [" << *o.state << "]";
    os << "\n";
    for (const auto& [name, value] : o.attrs) os << "  " << name << " = " << format_value(value) << "\n";
  }
  for (const auto& l : links_) os << "link " << l.assoc << " #" << l.a.id << " #" << l.b.id << "\n";
  return os.str();
}

std::optional<std::string> find_multiplicity_violation(const Model& model,
                                                       const ObjectSpace& space) {
  for (const auto& assoc : model.associations) {
    // For each end with an upper bound of one, count partners per object on the other end.
    for (int side = 0; side < 2; ++side) {
      const AssocEnd& bounded = side == 0 ? assoc.end_a : assoc.end_b;
      if (!is_single(bounded.multiplicity)) continue;
      std::map<ObjRef, int> partners;
      for (const auto& l : space.links()) {
        if (l.assoc != assoc.name) continue;
        ObjRef holder = side == 0 ? l.b : l.a;
        if (++partners[holder] > 1) {
          return "object #" + std::to_string(holder.id) + " has more than one '" + bounded.role +
                 "' in association '" + assoc.name + "' (multiplicity " +
                 to_string(bounded.multiplicity) + ")";
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace agm
