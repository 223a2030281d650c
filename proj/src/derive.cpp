#include "agm/derive.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "agm/syntax.hpp"

namespace agm {

std::optional<Criterion> Criterion::parse(const std::string& text) {
  if (text == "states") return Criterion{States, 0};
  if (text == "transitions") return Criterion{Transitions, 0};
  if (text.rfind("paths:", 0) == 0 && text.size() > 6) {
    std::size_t k = 0;
    for (char c : text.substr(6)) {
      if (c < '0' || c > '9' || k > 1000) return std::nullopt;
      k = k * 10 + static_cast<std::size_t>(c - '0');
    }
    return Criterion{Paths, k};
  }
  return std::nullopt;
}

std::string Criterion::str() const {
  switch (kind) {
    case States: return "states";
    case Transitions: return "transitions";
    case Paths: return "paths:" + std::to_string(k);
  }
  return {};
}

namespace {

using Path = std::vector<std::size_t>;  // transition indices

class ChartGraph {
 public:
  explicit ChartGraph(const Statechart& sc) : sc_(sc) {}

  std::set<std::string> reachable() const {
    std::set<std::string> seen{sc_.initial};
    std::deque<std::string> todo{sc_.initial};
    while (!todo.empty()) {
      std::string s = todo.front();
      todo.pop_front();
      for (const auto& t : sc_.transitions)
        if (t.source == s && seen.insert(t.target).second) todo.push_back(t.target);
    }
    return seen;
  }

  /// Shortest path from `from` to the nearest state satisfying `goal`, in BFS
  /// order with transitions tried in declaration order.
  template <class Goal>
  std::optional<std::pair<std::string, Path>> nearest(const std::string& from, Goal goal) const {
    std::map<std::string, std::pair<std::string, std::size_t>> parent;
    std::set<std::string> seen{from};
    std::deque<std::string> todo{from};
    while (!todo.empty()) {
      std::string s = todo.front();
      todo.pop_front();
      if (goal(s)) {
        Path p;
        for (std::string cur = s; cur != from;) {
          const auto& [prev, via] = parent.at(cur);
          p.insert(p.begin(), via);
          cur = prev;
        }
        return std::make_pair(s, p);
      }
      for (std::size_t i = 0; i < sc_.transitions.size(); ++i) {
        const auto& t = sc_.transitions[i];
        if (t.source == s && seen.insert(t.target).second) {
          parent[t.target] = {s, i};
          todo.push_back(t.target);
        }
      }
    }
    return std::nullopt;
  }

  const Statechart& chart() const { return sc_; }

 private:
  const Statechart& sc_;
};

std::vector<Path> cover_states(const ChartGraph& g) {
  auto reach = g.reachable();
  std::set<std::string> covered{g.chart().initial};
  std::vector<Path> out;
  auto uncovered = [&](const std::string& s) { return reach.count(s) && !covered.count(s); };
  do {
    Path path;
    std::string at = g.chart().initial;
    while (auto hop = g.nearest(at, uncovered)) {
      for (std::size_t i : hop->second) {
        path.push_back(i);
        covered.insert(g.chart().transitions[i].target);
      }
      at = hop->first;
    }
    out.push_back(std::move(path));
  } while (std::any_of(reach.begin(), reach.end(), uncovered));
  return out;
}

std::vector<Path> cover_transitions(const ChartGraph& g) {
  const auto& ts = g.chart().transitions;
  auto reach = g.reachable();
  std::vector<bool> covered(ts.size(), false);
  auto first_open = [&](const std::string& s) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (!covered[i] && ts[i].source == s) return i;
    return std::nullopt;
  };
  auto remaining = [&] {
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (!covered[i] && reach.count(ts[i].source)) return true;
    return false;
  };
  std::vector<Path> out;
  while (remaining()) {
    Path path;
    std::string at = g.chart().initial;
    while (auto hop = g.nearest(at, [&](const std::string& s) { return first_open(s).has_value(); })) {
      std::size_t t = *first_open(hop->first);
      for (std::size_t i : hop->second) covered[i] = true;
      path.insert(path.end(), hop->second.begin(), hop->second.end());
      path.push_back(t);
      covered[t] = true;
      at = ts[t].target;
    }
    out.push_back(std::move(path));
  }
  return out;
}

void simple_paths(const Statechart& sc, std::size_t k, Path& current,
                  std::vector<std::string>& visited, std::vector<Path>& out) {
  if (current.size() == k) return;
  for (std::size_t i = 0; i < sc.transitions.size(); ++i) {
    const auto& t = sc.transitions[i];
    if (t.source != visited.back()) continue;
    if (std::find(visited.begin(), visited.end(), t.target) != visited.end()) continue;
    current.push_back(i);
    visited.push_back(t.target);
    out.push_back(current);
    simple_paths(sc, k, current, visited, out);
    visited.pop_back();
    current.pop_back();
  }
}

Expr default_argument(const TypeRef& type, std::map<std::string, std::string>& extra) {
  if (type.name == "Int") return Expr::int_lit(0);
  if (type.name == "Bool") return Expr::bool_lit(false);
  if (type.name == "String") return Expr::string_lit("");
  auto [it, _] = extra.emplace(type.name, "arg" + type.name);
  return Expr::var(it->second);
}

}  // namespace

DerivedSuite derive_tests_from_statechart(const Model& model, const std::string& cls,
                                          const Criterion& criterion) {
  const ClassDef* c = model.find_class(cls);
  if (!c) throw ModelError("unknown-class", "unknown class '" + cls + "'");
  const Statechart* sc = effective_statechart(model, cls);
  if (!sc) throw ModelError("no-statechart", "class '" + cls + "' has no statechart");

  DerivedSuite out;
  ChartGraph graph(*sc);
  auto reach = graph.reachable();
  for (const auto& s : sc->states)
    if (!reach.count(s)) out.unreachable_states.push_back(s);

  std::set<std::string> warned;
  for (const auto& t : sc->transitions) {
    const MethodDef* m = find_method_on_chain(model, cls, t.trigger);
    if (m && !m->published && warned.insert(t.trigger).second)
      out.warnings.push_back("trigger '" + t.trigger + "' is not a published method");
  }
  if (is_abstract_class(model, cls))
    out.warnings.push_back("class '" + cls + "' is abstract; skeletons cannot instantiate it");
  for (const auto& a : effective_attributes(model, cls))
    if (!a.type.is_primitive())
      out.warnings.push_back("attribute '" + a.name + "' needs an explicit " + a.type.name +
                             " value in the setup");

  std::vector<Path> paths;
  switch (criterion.kind) {
    case Criterion::States: paths = cover_states(graph); break;
    case Criterion::Transitions: paths = cover_transitions(graph); break;
    case Criterion::Paths: {
      Path current;
      std::vector<std::string> visited{sc->initial};
      simple_paths(*sc, criterion.k, current, visited, paths);
      break;
    }
  }

  std::set<std::size_t> guarded;
  for (const auto& p : paths)
    for (std::size_t i : p)
      if (sc->transitions[i].guard && guarded.insert(i).second) {
        const Transition& tr = sc->transitions[i];
        out.warnings.push_back("transition " + tr.source + " -> " + tr.target + " on " + tr.trigger +
                               " is guarded by " + print_expr(*tr.guard) +
                               "; choose setup and argument values that satisfy it");
      }

  const std::string kind = criterion.kind == Criterion::Paths ? "paths" : criterion.str();
  for (std::size_t n = 0; n < paths.size(); ++n) {
    TestCase t;
    t.name = cls + "_" + kind + "_" + std::to_string(n + 1);
    t.category = Category::Unit;
    std::map<std::string, std::string> extra;  // class -> setup name of argument objects
    std::string state = sc->initial;
    for (std::size_t i : paths[n]) {
      const Transition& tr = sc->transitions[i];
      DriverItem d;
      d.kind = DriverKind::Trigger;
      std::vector<Expr> args;
      if (const MethodDef* m = find_method_on_chain(model, cls, tr.trigger))
        for (const auto& p : m->params) args.push_back(default_argument(p.type, extra));
      d.expr = Expr::call(Expr::var("obj"), tr.trigger, std::move(args));
      d.note = tr.source + " -> " + tr.target;
      if (tr.guard) d.note += " requires " + print_expr(*tr.guard);
      t.driver.push_back(std::move(d));
      state = tr.target;
    }
    t.setup.objects.push_back({"obj", cls, {}, {}});
    for (const auto& [arg_cls, name] : extra) t.setup.objects.push_back({name, arg_cls, {}, {}});
    t.assertions.push_back(Expr::in_state(Expr::var("obj"), state));
    out.tests.push_back(std::move(t));
  }
  return out;
}

}  // namespace agm
