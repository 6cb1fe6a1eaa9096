#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "iface_lens/diagnostic.hpp"
#include "iface_lens/java_parser.hpp"

namespace iface_lens {

using java::CompilationUnit;
using java::TypeDecl;
using java::TypeKind;

struct TypeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const TypeId&, const TypeId&) = default;
};

/// Method identity for set membership: name plus erased parameter types.
/// Return types and modifiers do not participate.
struct MethodSignature {
  std::string name;
  std::vector<std::string> parameter_type_names;

  friend auto operator<=>(const MethodSignature&, const MethodSignature&) = default;
  friend bool operator==(const MethodSignature&, const MethodSignature&) = default;
};

inline std::string to_string(const MethodSignature& sig) {
  std::string out = sig.name + "(";
  for (std::size_t k = 0; k < sig.parameter_type_names.size(); ++k) {
    if (k != 0) out += ",";
    out += sig.parameter_type_names[k];
  }
  return out + ")";
}

using MethodSet = std::set<MethodSignature>;

/// Which classes count as implementers of an interface.
/// Transitive follows superclasses and subinterfaces (instanceof semantics);
/// Direct only counts classes naming the interface in their own implements
/// clause.
enum class IcMode { Transitive, Direct };

struct TypeNode {
  std::string qualified_name;
  std::optional<TypeKind> kind;  // empty for external sentinels
  bool is_abstract = false;
  bool is_external = false;
  std::optional<TypeId> superclass;
  std::vector<TypeId> superinterfaces;  // sorted, unique
  MethodSet declared_public_methods;
  std::string file_path;

  bool is_class() const { return kind && java::is_class_like(*kind); }
  bool is_interface() const { return kind && !java::is_class_like(*kind); }

  friend bool operator==(const TypeNode&, const TypeNode&) = default;
};

struct GraphOptions {
  bool include_enums_annotations = true;
};

class TypeGraph;
TypeGraph build_type_graph(std::vector<CompilationUnit> units,
                           const GraphOptions& options = {});

/// The resolved corpus. Immutable once built; every query below is a
/// lookup into tables computed during construction.
class TypeGraph {
 public:
  TypeGraph() = default;

  const std::vector<TypeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  const TypeNode& node(TypeId id) const {
    if (id.value >= nodes_.size()) throw std::out_of_range("unknown TypeId");
    return nodes_[id.value];
  }

  std::optional<TypeId> find(std::string_view qualified_name) const {
    auto it = index_.find(std::string(qualified_name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Internal interfaces sorted by qualified name.
  const std::vector<TypeId>& interfaces() const { return interfaces_; }
  /// Internal classes sorted by qualified name.
  const std::vector<TypeId>& classes() const { return classes_; }

  const Diagnostics& diagnostics() const { return diagnostics_; }

  friend bool operator==(const TypeGraph& a, const TypeGraph& b) {
    return a.nodes_ == b.nodes_ && a.diagnostics_ == b.diagnostics_;
  }

 private:
  friend TypeGraph build_type_graph(std::vector<CompilationUnit>, const GraphOptions&);
  friend const MethodSet& public_methods(const TypeGraph&, TypeId);
  friend const std::vector<TypeId>& implementing_classes(const TypeGraph&, TypeId, IcMode);
  friend TypeId root_type(const TypeGraph&, TypeId);

  std::vector<TypeNode> nodes_;
  std::map<std::string, TypeId> index_;
  std::vector<TypeId> interfaces_;
  std::vector<TypeId> classes_;
  Diagnostics diagnostics_;

  // Derived tables, indexed by TypeId::value.
  std::vector<MethodSet> public_methods_;
  std::vector<std::vector<TypeId>> implementers_transitive_;
  std::vector<std::vector<TypeId>> implementers_direct_;
  std::vector<TypeId> roots_;
};

namespace detail {

inline const TypeNode& internal_node(const TypeGraph& graph, TypeId id,
                                     const char* op) {
  const TypeNode& n = graph.node(id);
  if (n.is_external)
    throw std::invalid_argument(std::string(op) + ": '" + n.qualified_name +
                                "' is external to the corpus");
  return n;
}

}  // namespace detail

/// PM(x). Classes: public instance methods declared directly in the class.
/// Interfaces: non-static, non-private methods declared in the interface or
/// inherited from corpus superinterfaces.
inline const MethodSet& public_methods(const TypeGraph& graph, TypeId t) {
  detail::internal_node(graph, t, "public_methods");
  return graph.public_methods_[t.value];
}

/// IC(i), sorted by TypeId (which orders by qualified name).
inline const std::vector<TypeId>& implementing_classes(
    const TypeGraph& graph, TypeId i, IcMode mode = IcMode::Transitive) {
  const TypeNode& n = detail::internal_node(graph, i, "implementing_classes");
  if (!n.is_interface())
    throw std::invalid_argument("implementing_classes: '" + n.qualified_name +
                                "' is not an interface");
  return mode == IcMode::Transitive ? graph.implementers_transitive_[i.value]
                                    : graph.implementers_direct_[i.value];
}

/// Topmost superclass of c. A class without a superclass is its own root;
/// a chain ending in an external type has that external sentinel as root.
inline TypeId root_type(const TypeGraph& graph, TypeId c) {
  const TypeNode& n = detail::internal_node(graph, c, "root_type");
  if (!n.is_class())
    throw std::invalid_argument("root_type: '" + n.qualified_name +
                                "' is not a class");
  return graph.roots_[c.value];
}

struct ResolvedName {
  std::string qualified_name;
  bool internal = false;

  friend bool operator==(const ResolvedName&, const ResolvedName&) = default;
};

/// Maps type names as written to qualified names, given every qualified name
/// in the corpus. Order: qualified corpus name, enclosing/nested scopes of the
/// unit, same package, single-type import, wildcard import, then an external
/// sentinel.
class NameResolver {
 public:
  explicit NameResolver(std::set<std::string> corpus_names)
      : corpus_(std::move(corpus_names)) {}

  bool contains(const std::string& qualified_name) const {
    return corpus_.count(qualified_name) != 0;
  }

  /// `context` is the qualified name of the referencing declaration; empty
  /// means top-level scope of the unit.
  ResolvedName resolve(const CompilationUnit& unit, const std::string& name,
                       const std::string& context = {},
                       Diagnostics* diagnostics = nullptr) const {
    if (name.find('.') != std::string::npos && contains(name)) return {name, true};

    const auto dot = name.find('.');
    const std::string head = name.substr(0, dot);
    const std::string rest = dot == std::string::npos ? "" : name.substr(dot);

    auto finish = [&](const std::string& head_qualified) -> ResolvedName {
      const std::string full = head_qualified + rest;
      return {full, contains(full)};
    };

    // Enclosing scopes, innermost first.
    if (!context.empty()) {
      std::unordered_set<std::string> unit_types;
      std::unordered_map<std::string, std::string> enclosing;
      for (const auto& t : unit.types) {
        unit_types.insert(t.qualified_name);
        enclosing.emplace(t.qualified_name, t.enclosing_name);
      }
      std::string scope = context;
      while (!scope.empty()) {
        const std::string candidate = scope + "." + head;
        if (unit_types.count(candidate) != 0 && contains(candidate))
          return finish(candidate);
        auto it = enclosing.find(scope);
        scope = it == enclosing.end() ? std::string() : it->second;
      }
    }

    const std::string same_package =
        unit.package_name.empty() ? head : unit.package_name + "." + head;
    if (contains(same_package)) return finish(same_package);

    for (const auto& imp : unit.imports) {
      if (imp.wildcard) continue;
      const auto last = imp.target.rfind('.');
      const std::string simple =
          last == std::string::npos ? imp.target : imp.target.substr(last + 1);
      if (simple == head) return finish(imp.target);
    }

    std::set<std::string> wildcard_hits;
    for (const auto& imp : unit.imports) {
      if (!imp.wildcard) continue;
      const std::string candidate = imp.target + "." + head;
      if (contains(candidate)) wildcard_hits.insert(candidate);
    }
    if (!wildcard_hits.empty()) {
      if (wildcard_hits.size() > 1 && diagnostics != nullptr) {
        std::string all;
        for (const auto& h : wildcard_hits) all += (all.empty() ? "" : ", ") + h;
        diagnostics->push_back(Diagnostic{
            DiagnosticKind::Resolve, unit.file_path, 0,
            "ambiguous wildcard import for '" + head + "' (" + all + "); using '" +
                *wildcard_hits.begin() + "'"});
      }
      return finish(*wildcard_hits.begin());
    }
    return {name, false};
  }

 private:
  std::set<std::string> corpus_;
};

namespace detail {

inline bool is_object(const std::string& name) {
  return name == "Object" || name == "java.lang.Object";
}

struct PendingDecl {
  const CompilationUnit* unit;
  const TypeDecl* decl;
};

// Drops every edge inside a strongly connected component of size > 1, and
// every self-edge. Returns the members of each broken cycle.
inline std::vector<std::vector<std::uint32_t>> break_cycles(
    std::vector<std::vector<std::uint32_t>>& edges) {
  const std::uint32_t n = static_cast<std::uint32_t>(edges.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  int counter = 0, comps = 0;

  // Iterative Tarjan.
  for (std::uint32_t start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> work{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!work.empty()) {
      auto& [v, next] = work.back();
      if (next < edges[v].size()) {
        const std::uint32_t w = edges[v][next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      const std::uint32_t done = v;
      work.pop_back();
      if (!work.empty()) {
        const std::uint32_t parent = work.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> members(static_cast<std::size_t>(comps));
  for (std::uint32_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

  std::set<int> broken;
  for (std::uint32_t v = 0; v < n; ++v) {
    auto& out = edges[v];
    const auto before = out.size();
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](std::uint32_t w) { return comp[w] == comp[v]; }),
              out.end());
    if (out.size() != before) broken.insert(comp[v]);
  }
  std::vector<std::vector<std::uint32_t>> cycles;
  for (int c : broken) cycles.push_back(members[c]);
  return cycles;
}

}  // namespace detail

/// Resolves all units into one graph. Units are processed in file-path
/// order so the result is independent of the order they were supplied in.
inline TypeGraph build_type_graph(std::vector<CompilationUnit> units,
                                  const GraphOptions& options) {
  std::stable_sort(units.begin(), units.end(),
                   [](const CompilationUnit& a, const CompilationUnit& b) {
                     return a.file_path < b.file_path;
                   });
  TypeGraph g;

  std::map<std::string, detail::PendingDecl> decls;
  for (const auto& unit : units) {
    for (const auto& decl : unit.types) {
      const bool synthetic =
          decl.kind == TypeKind::Enum || decl.kind == TypeKind::Annotation;
      if (synthetic && !options.include_enums_annotations) continue;
      auto [it, inserted] = decls.emplace(decl.qualified_name,
                                          detail::PendingDecl{&unit, &decl});
      if (!inserted) {
        g.diagnostics_.push_back(Diagnostic{
            DiagnosticKind::Resolve, unit.file_path, decl.line,
            "duplicate type '" + decl.qualified_name + "'; keeping the one in " +
                it->second.unit->file_path});
      }
    }
  }

  std::set<std::string> names;
  for (const auto& [name, _] : decls) names.insert(name);
  const NameResolver resolver(names);

  struct ResolvedDecl {
    std::optional<ResolvedName> superclass;
    std::vector<ResolvedName> supertypes;  // implements, or interface extends
  };
  std::map<std::string, ResolvedDecl> resolved;
  for (const auto& [name, pending] : decls) {
    const TypeDecl& decl = *pending.decl;
    ResolvedDecl r;
    auto resolve = [&](const std::string& written) {
      ResolvedName res =
          resolver.resolve(*pending.unit, written, decl.qualified_name, &g.diagnostics_);
      return res;
    };
    if (java::is_class_like(decl.kind)) {
      if (!decl.extends_names.empty()) {
        ResolvedName sup = resolve(decl.extends_names.front());
        if (!(detail::is_object(sup.qualified_name) && !sup.internal))
          r.superclass = sup;
      }
      for (const auto& n : decl.implements_names) r.supertypes.push_back(resolve(n));
    } else {
      for (const auto& n : decl.extends_names) r.supertypes.push_back(resolve(n));
    }
    resolved.emplace(name, std::move(r));
  }
  std::set<std::string> external_names;
  for (const auto& [_, r] : resolved) {
    if (r.superclass && !r.superclass->internal)
      external_names.insert(r.superclass->qualified_name);
    for (const auto& s : r.supertypes)
      if (!s.internal) external_names.insert(s.qualified_name);
  }

  for (const auto& [name, pending] : decls) {
    const TypeDecl& decl = *pending.decl;
    TypeNode node;
    node.qualified_name = name;
    node.kind = decl.kind;
    node.is_abstract = decl.is_abstract;
    node.file_path = pending.unit->file_path;
    for (const auto& m : decl.methods) {
      if (!m.is_public || m.is_static || m.is_constructor) continue;
      node.declared_public_methods.insert(
          MethodSignature{m.name, m.parameter_type_names});
    }
    g.index_.emplace(name, TypeId{static_cast<std::uint32_t>(g.nodes_.size())});
    g.nodes_.push_back(std::move(node));
  }
  for (const auto& name : external_names) {
    if (g.index_.count(name) != 0) continue;
    TypeNode node;
    node.qualified_name = name;
    node.is_external = true;
    g.index_.emplace(name, TypeId{static_cast<std::uint32_t>(g.nodes_.size())});
    g.nodes_.push_back(std::move(node));
  }

  const std::size_t n = g.nodes_.size();
  std::vector<std::vector<std::uint32_t>> class_edges(n), iface_edges(n);
  std::vector<std::vector<std::uint32_t>> implements(n);
  for (const auto& [name, r] : resolved) {
    const std::uint32_t from = g.index_.at(name).value;
    TypeNode& node = g.nodes_[from];
    auto mismatch = [&](const ResolvedName& target, const char* relation) {
      g.diagnostics_.push_back(Diagnostic{
          DiagnosticKind::Resolve, node.file_path, decls.at(name).decl->line,
          "'" + name + "' " + relation + " '" + target.qualified_name +
              "', which has the wrong kind; edge dropped"});
    };
    if (r.superclass) {
      const std::uint32_t to = g.index_.at(r.superclass->qualified_name).value;
      const TypeNode& target = g.nodes_[to];
      if (target.is_external || target.is_class())
        class_edges[from].push_back(to);
      else
        mismatch(*r.superclass, "extends");
    }
    for (const auto& s : r.supertypes) {
      const std::uint32_t to = g.index_.at(s.qualified_name).value;
      const TypeNode& target = g.nodes_[to];
      if (!(target.is_external || target.is_interface())) {
        mismatch(s, node.is_class() ? "implements" : "extends");
        continue;
      }
      if (node.is_class())
        implements[from].push_back(to);
      else
        iface_edges[from].push_back(to);
    }
  }

  auto report_cycles = [&](const std::vector<std::vector<std::uint32_t>>& cycles,
                           const char* what) {
    for (const auto& members : cycles) {
      std::string list;
      for (auto v : members)
        list += (list.empty() ? "" : ", ") + g.nodes_[v].qualified_name;
      g.diagnostics_.push_back(Diagnostic{
          DiagnosticKind::Cycle, g.nodes_[members.front()].file_path, 0,
          std::string(what) + " cycle among {" + list + "}; edges dropped"});
    }
  };
  report_cycles(detail::break_cycles(class_edges), "superclass");
  report_cycles(detail::break_cycles(iface_edges), "interface extension");

  for (std::size_t v = 0; v < n; ++v) {
    TypeNode& node = g.nodes_[v];
    if (!class_edges[v].empty()) node.superclass = TypeId{class_edges[v].front()};
    std::set<std::uint32_t> sup(iface_edges[v].begin(), iface_edges[v].end());
    sup.insert(implements[v].begin(), implements[v].end());
    for (auto s : sup) node.superinterfaces.push_back(TypeId{s});
    if (node.is_interface()) g.interfaces_.push_back(TypeId{static_cast<std::uint32_t>(v)});
    if (node.is_class()) g.classes_.push_back(TypeId{static_cast<std::uint32_t>(v)});
  }

  // Superinterface closure (reflexive) for interfaces; acyclic after pruning.
  std::vector<std::optional<std::set<std::uint32_t>>> closure(n);
  std::function<const std::set<std::uint32_t>&(std::uint32_t)> ancestors =
      [&](std::uint32_t v) -> const std::set<std::uint32_t>& {
    if (!closure[v]) {
      std::set<std::uint32_t> acc{v};
      for (auto w : iface_edges[v]) {
        const auto& up = ancestors(w);
        acc.insert(up.begin(), up.end());
      }
      closure[v] = std::move(acc);
    }
    return *closure[v];
  };

  g.public_methods_.assign(n, {});
  g.implementers_transitive_.assign(n, {});
  g.implementers_direct_.assign(n, {});
  g.roots_.assign(n, TypeId{});
  for (std::uint32_t v = 0; v < n; ++v) {
    const TypeNode& node = g.nodes_[v];
    if (node.is_interface()) {
      for (auto a : ancestors(v)) {
        const TypeNode& up = g.nodes_[a];
        g.public_methods_[v].insert(up.declared_public_methods.begin(),
                                    up.declared_public_methods.end());
      }
    } else if (node.is_class()) {
      g.public_methods_[v] = node.declared_public_methods;

      std::set<std::uint32_t> all;
      std::uint32_t cur = v;
      std::uint32_t root = v;
      for (;;) {
        root = cur;
        for (auto i : implements[cur]) {
          const auto& up = ancestors(i);
          all.insert(up.begin(), up.end());
        }
        if (class_edges[cur].empty()) break;
        cur = class_edges[cur].front();
      }
      g.roots_[v] = TypeId{root};
      for (auto i : all)
        if (g.nodes_[i].is_interface())
          g.implementers_transitive_[i].push_back(TypeId{v});
      for (auto i : std::set<std::uint32_t>(implements[v].begin(), implements[v].end()))
        if (g.nodes_[i].is_interface()) g.implementers_direct_[i].push_back(TypeId{v});
    }
  }

  std::sort(g.diagnostics_.begin(), g.diagnostics_.end());
  return g;
}

}  // namespace iface_lens
