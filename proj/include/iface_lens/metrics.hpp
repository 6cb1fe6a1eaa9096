#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iface_lens/type_graph.hpp"

namespace iface_lens {

using Rational = boost::multiprecision::cpp_rational;

enum class TvBin { Unimplemented, Null, Tiny, Small, Medium, Large, Huge };
enum class TcBin { Absent, Partial, SemiPartial, SemiComplete, Complete };

inline constexpr TvBin kTvBins[] = {TvBin::Unimplemented, TvBin::Null,  TvBin::Tiny,
                                    TvBin::Small,         TvBin::Medium, TvBin::Large,
                                    TvBin::Huge};
inline constexpr TcBin kTcBins[] = {TcBin::Absent, TcBin::Partial, TcBin::SemiPartial,
                                    TcBin::SemiComplete, TcBin::Complete};

inline const char* to_string(TvBin bin) {
  switch (bin) {
    case TvBin::Unimplemented: return "UNIMPLEMENTED";
    case TvBin::Null: return "NULL";
    case TvBin::Tiny: return "TINY";
    case TvBin::Small: return "SMALL";
    case TvBin::Medium: return "MEDIUM";
    case TvBin::Large: return "LARGE";
    case TvBin::Huge: return "HUGE";
  }
  return "?";
}

inline const char* to_string(TcBin bin) {
  switch (bin) {
    case TcBin::Absent: return "ABSENT";
    case TcBin::Partial: return "PARTIAL";
    case TcBin::SemiPartial: return "SEMI_PARTIAL";
    case TcBin::SemiComplete: return "SEMI_COMPLETE";
    case TcBin::Complete: return "COMPLETE";
  }
  return "?";
}

inline std::optional<TvBin> parse_tv_bin(std::string_view s) {
  for (auto b : kTvBins)
    if (s == to_string(b)) return b;
  return std::nullopt;
}

inline std::optional<TcBin> parse_tc_bin(std::string_view s) {
  for (auto b : kTcBins)
    if (s == to_string(b)) return b;
  return std::nullopt;
}

struct InterfaceMetricsRow {
  std::string interface_name;
  std::size_t implementer_count = 0;
  std::size_t tv = 0;
  TvBin tv_bin = TvBin::Unimplemented;
  std::optional<Rational> tc;
  TcBin tc_bin = TcBin::Absent;
  std::size_t pm_size = 0;
  std::size_t clamp_warnings = 0;

  friend bool operator==(const InterfaceMetricsRow&, const InterfaceMetricsRow&) = default;
};

/// TV(i): number of distinct root types among the implementers of i.
inline std::size_t type_variability(const TypeGraph& graph, TypeId i,
                                    IcMode mode = IcMode::Transitive) {
  std::set<TypeId> roots;
  for (TypeId c : implementing_classes(graph, i, mode)) roots.insert(root_type(graph, c));
  return roots.size();
}

struct TypeCompleteness {
  std::optional<Rational> value;  // absent when i has no implementers
  std::size_t clamp_warnings = 0;
};

/// TC(i): mean of |PM(i)| / |PM(c)| over implementers c. A class with no
/// public methods implementing a method-less interface counts as ratio 1;
/// ratios above 1 (abstract implementers declaring fewer methods than the
/// interface) are clamped to 1 and counted.
inline TypeCompleteness type_completeness(const TypeGraph& graph, TypeId i,
                                          IcMode mode = IcMode::Transitive) {
  const auto& implementers = implementing_classes(graph, i, mode);
  TypeCompleteness out;
  if (implementers.empty()) return out;
  const std::size_t interface_size = public_methods(graph, i).size();
  Rational sum = 0;
  for (TypeId c : implementers) {
    const std::size_t class_size = public_methods(graph, c).size();
    Rational ratio;
    if (class_size == 0) {
      ratio = 1;
      if (interface_size != 0) ++out.clamp_warnings;
    } else {
      ratio = Rational(interface_size, class_size);
      if (ratio > 1) {
        ratio = 1;
        ++out.clamp_warnings;
      }
    }
    sum += ratio;
  }
  out.value = sum / implementers.size();
  return out;
}

inline TvBin tv_bin(std::size_t tv) {
  if (tv == 0) return TvBin::Unimplemented;
  if (tv == 1) return TvBin::Null;
  if (tv == 2) return TvBin::Tiny;
  if (tv <= 5) return TvBin::Small;
  if (tv <= 10) return TvBin::Medium;
  if (tv <= 15) return TvBin::Large;
  return TvBin::Huge;
}

inline TcBin tc_bin(const std::optional<Rational>& tc) {
  if (!tc) return TcBin::Absent;
  if (*tc < 0 || *tc > 1) throw std::invalid_argument("tc_bin: value outside [0,1]");
  if (*tc < Rational(2, 5)) return TcBin::Partial;
  if (*tc < Rational(3, 5)) return TcBin::SemiPartial;
  if (*tc < 1) return TcBin::SemiComplete;
  return TcBin::Complete;
}

/// One row per internal interface, ordered by qualified name.
inline std::vector<InterfaceMetricsRow> compute_all(const TypeGraph& graph,
                                                    IcMode mode = IcMode::Transitive) {
  std::vector<InterfaceMetricsRow> rows;
  rows.reserve(graph.interfaces().size());
  for (TypeId i : graph.interfaces()) {
    InterfaceMetricsRow row;
    row.interface_name = graph.node(i).qualified_name;
    row.implementer_count = implementing_classes(graph, i, mode).size();
    row.tv = type_variability(graph, i, mode);
    row.tv_bin = tv_bin(row.tv);
    auto tc = type_completeness(graph, i, mode);
    row.tc = std::move(tc.value);
    row.tc_bin = tc_bin(row.tc);
    row.clamp_warnings = tc.clamp_warnings;
    row.pm_size = public_methods(graph, i).size();
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.interface_name < b.interface_name;
  });
  return rows;
}

/// Decimal rendering with exactly `places` fraction digits, rounding half to
/// even. Only non-negative values occur in reports.
inline std::string format_decimal(const Rational& value, unsigned places = 4) {
  using boost::multiprecision::cpp_int;
  if (value < 0) throw std::invalid_argument("format_decimal: negative value");
  cpp_int scale = 1;
  for (unsigned k = 0; k < places; ++k) scale *= 10;
  const cpp_int num = boost::multiprecision::numerator(value) * scale;
  const cpp_int den = boost::multiprecision::denominator(value);
  cpp_int q = num / den;
  const cpp_int twice_rem = (num % den) * 2;
  if (twice_rem > den || (twice_rem == den && (q % 2) != 0)) ++q;
  const cpp_int whole = q / scale;
  std::string frac = cpp_int(q % scale).str();
  if (frac.size() < places) frac.insert(0, places - frac.size(), '0');
  return places == 0 ? whole.str() : whole.str() + "." + frac;
}

inline std::string format_rational(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

/// Inverse of format_rational; throws std::invalid_argument on malformed text.
inline Rational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  const auto slash = text.find('/');
  auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return c >= '0' && c <= '9'; });
  };
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!digits(num) || !digits(den) || den.find_first_not_of('0') == std::string::npos)
    throw std::invalid_argument("malformed rational '" + text + "'");
  return Rational(cpp_int(num), cpp_int(den));
}

}  // namespace iface_lens
