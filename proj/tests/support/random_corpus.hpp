#pragma once

// Random Java corpora described abstractly, rendered to source text, and a
// brute-force oracle computing the expected metrics from the description
// alone (no parser or graph code involved).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/sources.hpp"

namespace iface_lens::testing {

struct RMethod {
  int pool = 0;         // index into method_pool()
  int variant = 0;      // spelling variant of the parameter list
  bool is_public = true;  // classes: public modifier; interfaces: not private
  bool is_static = false;
  bool is_default = false;  // interfaces only
};

struct RType {
  enum Kind { Class, AbstractClass, Enum, Interface } kind = Class;
  int package = 0;          // 0: g.a, 1: g.b
  int superclass = -1;      // corpus class index, or -1
  int external_super = -1;  // index into external_supers() when superclass < 0
  bool extends_object = false;
  std::vector<int> interfaces;  // implements (classes) or extends (interfaces)
  int external_interface = -1;  // index into external_interfaces()
  bool generic = false;
  bool constructor = false;
  std::vector<RMethod> methods;
  std::vector<int> ref_style;  // per referenced type: 0 FQN, 1 import, 2 wildcard
};

struct RCorpus {
  std::vector<RType> types;
  std::uint64_t seed = 0;
};

// Erased signature plus spellings that must all erase to it.
struct PoolEntry {
  std::string name;
  std::string signature;
  std::vector<std::string> spellings;  // parameter list text
};

inline const std::vector<PoolEntry>& method_pool() {
  static const std::vector<PoolEntry> pool = {
      {"a", "a()", {""}},
      {"b", "b(int)", {"int x", "final int x", "@Deprecated int x"}},
      {"c", "c(String)", {"String s", "final String s"}},
      {"c", "c(String[])", {"String... s", "String[] s", "String s[]"}},
      {"d", "d(List)", {"List<String> l", "List<? extends Number> l", "List<List<String>> l"}},
      {"e", "e(int[][],long)", {"int[][] x, long y", "int[] x[], long y", "int x[][], long y"}},
      {"f", "f(Map)", {"Map<String, List<Integer>> m", "Map<?, ?> m"}},
      {"g", "g(double,String)", {"double d, String s", "final double d, final String s"}},
  };
  return pool;
}

inline const std::vector<std::string>& external_supers() {
  static const std::vector<std::string> s = {"java.util.AbstractList", "java.util.HashMap"};
  return s;
}

inline const std::vector<std::string>& external_interfaces() {
  static const std::vector<std::string> s = {"java.io.Serializable", "java.lang.Runnable"};
  return s;
}

inline std::string type_name(int k) { return "T" + std::to_string(k); }
inline std::string package_name(int p) { return p == 0 ? "g.a" : "g.b"; }
inline std::string qualified(const RCorpus& c, int k) {
  return package_name(c.types[k].package) + "." + type_name(k);
}

inline RCorpus random_corpus(std::uint64_t seed, int max_types = 12) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  RCorpus c;
  c.seed = seed;
  const int n = pick(1, max_types);
  c.types.resize(n);
  for (int k = 0; k < n; ++k) {
    RType& t = c.types[k];
    const int roll = pick(0, 9);
    t.kind = roll < 4 ? RType::Interface : roll < 8 ? RType::Class
             : roll < 9 ? RType::AbstractClass : RType::Enum;
    t.package = pick(0, 1);
  }
  for (int k = 0; k < n; ++k) {
    RType& t = c.types[k];
    const bool iface = t.kind == RType::Interface;
    t.generic = iface && chance(0.3);
    if (!iface && t.kind != RType::Enum) {
      std::vector<int> supers;
      for (int j = 0; j < k; ++j)
        if (c.types[j].kind == RType::Class || c.types[j].kind == RType::AbstractClass)
          supers.push_back(j);
      if (!supers.empty() && chance(0.5)) {
        t.superclass = supers[pick(0, static_cast<int>(supers.size()) - 1)];
      } else if (chance(0.25)) {
        t.external_super = pick(0, static_cast<int>(external_supers().size()) - 1);
      } else {
        t.extends_object = chance(0.2);
      }
      t.constructor = chance(0.4);
    }
    // Interfaces extend only earlier interfaces, so the hierarchy is acyclic.
    for (int j = 0; j < n; ++j) {
      if (c.types[j].kind != RType::Interface) continue;
      if (iface && j >= k) continue;
      if (chance(iface ? 0.3 : 0.35)) t.interfaces.push_back(j);
    }
    if (chance(0.2)) t.external_interface = pick(0, static_cast<int>(external_interfaces().size()) - 1);

    std::vector<int> order(method_pool().size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int m = pick(0, static_cast<int>(order.size()));
    for (int q = 0; q < m; ++q) {
      RMethod meth;
      meth.pool = order[q];
      meth.variant = pick(0, static_cast<int>(method_pool()[meth.pool].spellings.size()) - 1);
      meth.is_public = chance(iface ? 0.85 : 0.7);
      meth.is_static = chance(0.15);
      meth.is_default = iface && meth.is_public && !meth.is_static && chance(0.3);
      t.methods.push_back(meth);
    }
    t.ref_style.resize(n);
    for (auto& s : t.ref_style) s = pick(0, 2);
  }
  return c;
}

namespace detail {

// Balanced junk that a correct body skipper must treat as opaque.
inline std::string junk_body(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "String s = \"}{ \\\" }\";",
      "char ch = '{';",
      "char q = '\\'';",
      "/* } } { */",
      "// stray }\n",
      "{ int z = 1; { z++; } }",
      "Runnable r = () -> { int w = 0; };",
      "Object o = new Object() { public void hidden() {} public String toString() { return \"}\"; } };",
      "java.util.List<java.util.List<String>> nested = null;",
      "int[] arr = {1, 2, 3};",
      "if (1 > 0) { } else { }",
      "String tb = \"\"\"\n   } not a brace {\n   \"\"\";",
      "class Local { public void nope() {} }",
      "label: for (int i = 0; i < 2; i++) { if (i >> 1 > 0) break label; }",
  };
  std::string out;
  const int n = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int k = 0; k < n; ++k)
    out += " " + pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
  return out + " ";
}

}  // namespace detail

inline SourceList render(const RCorpus& c) {
  std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  SourceList out;
  const int n = static_cast<int>(c.types.size());
  for (int k = 0; k < n; ++k) {
    const RType& t = c.types[k];
    std::set<std::string> imports;
    imports.insert("java.util.List");
    imports.insert("java.util.Map");

    auto ref = [&](int j) -> std::string {
      if (c.types[j].package == t.package && t.ref_style[j] != 0) return type_name(j);
      switch (t.ref_style[j]) {
        case 1:
          imports.insert(qualified(c, j));
          return type_name(j);
        case 2:
          imports.insert(package_name(c.types[j].package) + ".*");
          return type_name(j);
        default:
          return qualified(c, j);
      }
    };
    auto ref_interface = [&](int j) {
      std::string s = ref(j);
      if (c.types[j].generic) s += "<String>";
      return s;
    };

    std::string head;
    const bool iface = t.kind == RType::Interface;
    if (iface) {
      head = "public interface " + type_name(k) + (t.generic ? "<X extends Comparable<X>>" : "");
      std::vector<std::string> ext;
      for (int j : t.interfaces) ext.push_back(ref_interface(j));
      if (t.external_interface >= 0) ext.push_back(external_interfaces()[t.external_interface]);
      for (std::size_t q = 0; q < ext.size(); ++q) head += (q ? ", " : " extends ") + ext[q];
    } else {
      head = t.kind == RType::Enum ? "public enum " : t.kind == RType::AbstractClass
                                                        ? "public abstract class "
                                                        : "public class ";
      head += type_name(k);
      if (t.superclass >= 0) head += " extends " + ref(t.superclass);
      else if (t.external_super >= 0) head += " extends " + external_supers()[t.external_super] + "<String>";
      else if (t.extends_object) head += " extends Object";
      std::vector<std::string> impl;
      for (int j : t.interfaces) impl.push_back(ref_interface(j));
      if (t.external_interface >= 0) impl.push_back(external_interfaces()[t.external_interface]);
      for (std::size_t q = 0; q < impl.size(); ++q) head += (q ? ", " : " implements ") + impl[q];
    }

    std::string body;
    if (t.kind == RType::Enum) body += "  ONE, TWO { public void constantBody() {} };\n";
    body += iface ? "  int LIMIT = 3;\n" : "  private int field = 0;\n";
    body += "  static final String NAME = \"{\";\n";
    if (t.constructor) body += "  public " + type_name(k) + "() {" + detail::junk_body(rng) + "}\n";
    for (const auto& m : t.methods) {
      const auto& entry = method_pool()[m.pool];
      std::string mods;
      if (iface) {
        if (!m.is_public) mods = "private ";
        else if (rng() % 3 == 0) mods = "public ";
        if (m.is_static) mods += "static ";
        else if (m.is_default) mods += "default ";
      } else {
        if (m.is_public) mods = "public ";
        else mods = std::vector<std::string>{"", "protected ", "private "}[rng() % 3];
        if (m.is_static) mods += "static ";
      }
      const std::string sig = entry.name + "(" + entry.spellings[m.variant] + ")";
      const bool has_body = !iface || m.is_static || m.is_default || !m.is_public;
      if (has_body && rng() % 4 == 0) body += "  @Override\n";
      body += "  " + mods + "void " + sig +
              (has_body ? " {" + detail::junk_body(rng) + "}\n" : ";\n");
    }
    if (!iface) body += "  { field++; }\n  static { }\n";

    std::string text = "package " + package_name(t.package) + ";\n\n";
    const std::string decl = "/** Generated {@code " + type_name(k) + "}. */\n" + head +
                             " {\n" + body + "}\n";
    for (const auto& imp : imports) text += "import " + imp + ";\n";
    text += "\n" + decl;
    out.emplace_back("g/" + std::string(t.package == 0 ? "a/" : "b/") + type_name(k) + ".java",
                     text);
  }
  return out;
}

// Expected metrics from the description alone.
struct OracleRow {
  std::string interface_name;
  std::size_t implementer_count = 0;
  std::size_t pm_size = 0;
  std::size_t tv = 0;
  bool has_tc = false;
  std::int64_t tc_num = 0, tc_den = 1;  // reduced
  std::size_t clamp_warnings = 0;
};

struct OracleSummary {
  std::size_t interfaces = 0, classes = 0, implementations = 0, direct_implementations = 0;
};

inline std::set<int> interface_closure(const RCorpus& c, int i) {
  std::set<int> out{i};
  for (int j : c.types[i].interfaces) {
    auto up = interface_closure(c, j);
    out.insert(up.begin(), up.end());
  }
  return out;
}

inline std::set<std::string> oracle_pm(const RCorpus& c, int k) {
  std::set<std::string> pm;
  const RType& t = c.types[k];
  if (t.kind == RType::Interface) {
    for (int j : interface_closure(c, k))
      for (const auto& m : c.types[j].methods)
        if (m.is_public && !m.is_static) pm.insert(method_pool()[m.pool].signature);
  } else {
    for (const auto& m : t.methods)
      if (m.is_public && !m.is_static) pm.insert(method_pool()[m.pool].signature);
  }
  return pm;
}

inline std::string oracle_root(const RCorpus& c, int k) {
  while (c.types[k].superclass >= 0) k = c.types[k].superclass;
  if (c.types[k].external_super >= 0) return external_supers()[c.types[k].external_super];
  return qualified(c, k);
}

inline bool oracle_implements(const RCorpus& c, int cls, int i, bool direct) {
  if (direct) {
    const auto& v = c.types[cls].interfaces;
    return std::find(v.begin(), v.end(), i) != v.end();
  }
  for (int k = cls; k >= 0; k = c.types[k].superclass)
    for (int j : c.types[k].interfaces)
      if (interface_closure(c, j).count(i)) return true;
  return false;
}

inline std::vector<OracleRow> oracle_rows(const RCorpus& c, bool direct = false) {
  std::vector<OracleRow> rows;
  const int n = static_cast<int>(c.types.size());
  for (int i = 0; i < n; ++i) {
    if (c.types[i].kind != RType::Interface) continue;
    OracleRow row;
    row.interface_name = qualified(c, i);
    const std::int64_t pi = static_cast<std::int64_t>(oracle_pm(c, i).size());
    row.pm_size = static_cast<std::size_t>(pi);
    std::set<std::string> roots;
    std::int64_t num = 0, den = 1;
    for (int k = 0; k < n; ++k) {
      if (c.types[k].kind == RType::Interface || !oracle_implements(c, k, i, direct)) continue;
      ++row.implementer_count;
      roots.insert(oracle_root(c, k));
      const std::int64_t pc = static_cast<std::int64_t>(oracle_pm(c, k).size());
      std::int64_t rn = 1, rd = 1;
      if (pc == 0) {
        if (pi != 0) ++row.clamp_warnings;
      } else if (pi > pc) {
        ++row.clamp_warnings;
      } else {
        rn = pi;
        rd = pc;
      }
      num = num * rd + rn * den;
      den *= rd;
      const std::int64_t g = std::gcd(num, den);
      num /= g;
      den /= g;
    }
    row.tv = roots.size();
    if (row.implementer_count > 0) {
      row.has_tc = true;
      den *= static_cast<std::int64_t>(row.implementer_count);
      const std::int64_t g = std::gcd(num, den);
      row.tc_num = num / g;
      row.tc_den = den / g;
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.interface_name < b.interface_name; });
  return rows;
}

inline OracleSummary oracle_summary(const RCorpus& c) {
  OracleSummary s;
  const int n = static_cast<int>(c.types.size());
  for (int k = 0; k < n; ++k) {
    if (c.types[k].kind == RType::Interface) {
      ++s.interfaces;
      continue;
    }
    ++s.classes;
    bool any = false, any_direct = false;
    for (int i = 0; i < n; ++i) {
      if (c.types[i].kind != RType::Interface) continue;
      any = any || oracle_implements(c, k, i, false);
      any_direct = any_direct || oracle_implements(c, k, i, true);
    }
    s.implementations += any;
    s.direct_implementations += any_direct;
  }
  return s;
}

}  // namespace iface_lens::testing
