#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

namespace iface_lens {

// Where a diagnostic originated. Parse diagnostics are the ones counted by
// --fail-on-parse-errors.
enum class DiagnosticKind { Io, Parse, Resolve, Cycle };

inline const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::Io: return "io";
    case DiagnosticKind::Parse: return "parse";
    case DiagnosticKind::Resolve: return "resolve";
    case DiagnosticKind::Cycle: return "cycle";
  }
  return "unknown";
}

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::Parse;
  std::string path;  // empty for corpus-wide diagnostics
  std::size_t line = 0;  // 0 when no line applies
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;

  friend bool operator<(const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.path, a.line, a.kind, a.message) <
           std::tie(b.path, b.line, b.kind, b.message);
  }
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace iface_lens
